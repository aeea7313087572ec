#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "dagiso/ci.hpp"
#include "dagiso/classify.hpp"
#include "dagiso/errors.hpp"
#include "dagiso/isodag.hpp"
#include "dagiso/json_io.hpp"
#include "dagiso/variety.hpp"

namespace dagiso::cli {

namespace {

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t q = kMersenne31;
  bool one_based = false;
  std::string out;
};

struct Options {
  Common common;
  // iso / equiv
  std::string g1, g2;
  std::optional<int> m;
  std::optional<std::string> eps;
  // dsep / relations / sample / lies-below
  std::string graph;
  int i = -1, j = -1;
  std::vector<int> cond;
  std::string kind = "implied";
  std::vector<int> removed;
  bool rational = false;
  std::string sub;
  std::vector<int> embed;
  // classify-trees
  int n = 0;
  std::string mode = "cross-check";
  // ci-gaussian
  std::string matrix;
  std::vector<int> a, b;
};

std::vector<Node> shifted(const std::vector<int>& ids, bool one_based) {
  std::vector<Node> out(ids.begin(), ids.end());
  if (one_based)
    for (Node& v : out) --v;
  return out;
}

Dag load_dag(const std::string& path, bool one_based) { return dag_from_json(read_json_file(path), one_based); }

struct Outcome {
  Json json;
  int code = 0;
};

Outcome run_iso(const Options& o, bool with_permutations) {
  const Dag g = load_dag(o.g1, o.common.one_based), h = load_dag(o.g2, o.common.one_based);
  IsoParams p = make_params(g, h, o.m.value_or(3), o.common.q, o.common.seed);
  if (o.eps) p.m = rounds_for_epsilon(g.n(), p.d_bound, p.q, parse_rational(*o.eps), with_permutations);
  const IsoVerdict v = with_permutations ? isodag_test(g, h, p) : equiv_randomized(g, h, p);
  return {verdict_to_json(v, o.common.one_based), v.answer ? 0 : 1};
}

Outcome run_dsep(const Options& o) {
  const bool ob = o.common.one_based;
  const Dag g = load_dag(o.graph, ob);
  CiStatement s{o.i - (ob ? 1 : 0), o.j - (ob ? 1 : 0), shifted(o.cond, ob)};
  std::sort(s.cond.begin(), s.cond.end());
  const bool sep = d_separated(g, s.i, s.j, s.cond);
  return {{{"d_separated", sep}, {"statement", ci_to_json(s, ob)}}};
}

Outcome run_relations(const Options& o) {
  const bool ob = o.common.one_based;
  const Dag g = load_dag(o.graph, ob);
  Json items = Json::array();
  if (o.kind == "imposed") {
    for (const CiStatement& s : toposorted_imposed(g)) items.push_back(ci_to_json(s, ob));
  } else if (o.kind == "implied") {
    for (const CiStatement& s : implied_relations(g)) items.push_back(ci_to_json(s, ob));
  } else if (o.kind == "minors") {
    for (const MinorSpec& m : imposed_minors(g)) items.push_back(minor_to_json(m, ob));
  } else if (o.kind == "tree") {
    for (const TreeRelation& r : tree_reduced_generators(g)) items.push_back(tree_relation_to_json(r, ob));
  } else if (o.kind == "marginal") {
    auto removed = shifted(o.removed, ob);
    std::sort(removed.begin(), removed.end());
    for (const CiStatement& s : marginal_implied(g, removed)) items.push_back(ci_to_json(s, ob));
  } else {
    throw InputError("unknown relation kind \"" + o.kind + "\"");
  }
  return {{{"kind", o.kind}, {"relations", std::move(items)}}};
}

Outcome run_sample(const Options& o) {
  const Dag g = load_dag(o.graph, o.common.one_based);
  if (o.rational) {
    Rng rng(o.common.seed);
    return {point_to_json(sem_covariance(random_sem_params(g, rng)))};
  }
  return {point_to_json(sample_point(g, PrimeField(o.common.q), o.common.seed))};
}

Outcome run_classify(const Options& o) {
  const ClassReport r = classify_trees(o.n, mode_from_name(o.mode), {o.m.value_or(3), o.common.q, o.common.seed});
  return {report_to_json(r, o.common.one_based)};
}

Outcome run_ci_gaussian(const Options& o) {
  const bool ob = o.common.one_based;
  const Json j = read_json_file(o.matrix);
  auto a = shifted(o.a, ob), b = shifted(o.b, ob), c = shifted(o.cond, ob);
  CiRanks ranks;
  if (j.is_object() && j.contains("q") && j.at("q").is_number()) {
    const FpPoint p = fp_point_from_json(j);
    ranks = gaussian_ci_ranks(p.field, p.mat, a, b, c);
  } else {
    ranks = gaussian_ci_ranks(RationalField{}, rational_matrix_from_json(j), a, b, c);
  }
  return {{{"independent", ranks.independent()},
           {"rank_joint", ranks.joint},
           {"rank_conditioning", ranks.conditioning}}};
}

Outcome run_lies_below(const Options& o) {
  const bool ob = o.common.one_based;
  const Dag sub = load_dag(o.sub, ob), g = load_dag(o.graph, ob);
  const auto embed = shifted(o.embed, ob);
  return {{{"lies_below", lies_below_ci(sub, g, embed)}}};
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

int fail(std::ostream& err, const char* kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
  return 2;
}

void add_common(CLI::App* cmd, Common& c, bool randomized) {
  cmd->add_flag("--one-based", c.one_based, "Read and write 1-based node ids");
  cmd->add_option("--out", c.out, "Write the JSON result to this file instead of stdout");
  if (randomized) {
    cmd->add_option("--seed", c.seed, "Master seed (default is a fixed constant)");
    cmd->add_option("--q", c.q, "Prime modulus below 2^32")->capture_default_str();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isomorphism and Markov equivalence of DAG models", "dagiso"};
  app.require_subcommand(1);
  Options o;

  auto* iso = app.add_subcommand("iso", "Randomized isomorphism test of two DAG models");
  auto* equiv = app.add_subcommand("equiv", "Randomized Markov-equivalence test (identity relabeling only)");
  for (auto* cmd : {iso, equiv}) {
    cmd->add_option("g1", o.g1, "First DAG (JSON)")->required();
    cmd->add_option("g2", o.g2, "Second DAG (JSON)")->required();
    auto* m = cmd->add_option("--m", o.m, "Number of rounds (default 3)");
    cmd->add_option("--eps", o.eps, "Target failure bound, e.g. 1e-9; picks the number of rounds")->excludes(m);
    add_common(cmd, o.common, true);
  }

  auto* dsep = app.add_subcommand("dsep", "d-separation query");
  dsep->add_option("graph", o.graph, "DAG (JSON)")->required();
  dsep->add_option("--i", o.i, "First node")->required();
  dsep->add_option("--j", o.j, "Second node")->required();
  dsep->add_option("--cond", o.cond, "Conditioning set");
  add_common(dsep, o.common, false);

  auto* rel = app.add_subcommand("relations", "Conditional-independence relations or minors of a DAG");
  rel->add_option("graph", o.graph, "DAG (JSON)")->required();
  rel->add_option("--kind", o.kind, "imposed | implied | minors | tree | marginal")
      ->check(CLI::IsMember({"imposed", "implied", "minors", "tree", "marginal"}))
      ->capture_default_str();
  rel->add_option("--remove", o.removed, "Nodes marginalized out (kind = marginal)");
  add_common(rel, o.common, false);

  auto* sample = app.add_subcommand("sample", "Draw a point on the model's variety");
  sample->add_option("graph", o.graph, "DAG (JSON)")->required();
  sample->add_flag("--rational", o.rational, "Exact covariance from random small-integer SEM parameters");
  add_common(sample, o.common, true);

  auto* classify = app.add_subcommand("classify-trees", "Isomorphism classes of directed tree models");
  classify->add_option("--n", o.n, "Number of nodes")->required();
  classify->add_option("--mode", o.mode, "oracle | randomized | cross-check")
      ->check(CLI::IsMember({"oracle", "randomized", "cross-check"}))
      ->capture_default_str();
  classify->add_option("--m", o.m, "Rounds per randomized merge (default 3)");
  add_common(classify, o.common, true);

  auto* ci = app.add_subcommand("ci-gaussian", "Rank test for A _||_ B | C on a covariance matrix");
  ci->add_option("matrix", o.matrix, "Matrix JSON ({\"q\": ..., \"mat\": ...} or a bare array)")->required();
  ci->add_option("--a", o.a, "Set A")->required();
  ci->add_option("--b", o.b, "Set B")->required();
  ci->add_option("--cond", o.cond, "Set C");
  add_common(ci, o.common, false);

  auto* below = app.add_subcommand("lies-below", "Does every relation of the embedded model hold in the larger one?");
  below->add_option("sub", o.sub, "Smaller DAG (JSON)")->required();
  below->add_option("graph", o.graph, "Larger DAG (JSON)")->required();
  below->add_option("--embed", o.embed, "Image of each node of the smaller DAG")->required();
  add_common(below, o.common, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(err, "usage", e.what());
  }

  try {
    Outcome r;
    if (iso->parsed()) r = run_iso(o, true);
    else if (equiv->parsed()) r = run_iso(o, false);
    else if (dsep->parsed()) r = run_dsep(o);
    else if (rel->parsed()) r = run_relations(o);
    else if (sample->parsed()) r = run_sample(o);
    else if (classify->parsed()) r = run_classify(o);
    else if (ci->parsed()) r = run_ci_gaussian(o);
    else r = run_lies_below(o);
    emit(r.json, o.common.out, out);
    return r.code;
  } catch (const CrossCheckFailure& e) {
    return fail(err, "cross_check_failure", e.what());
  } catch (const SizeGuardError& e) {
    return fail(err, "size_guard", e.what());
  } catch (const ParameterError& e) {
    return fail(err, "parameter", e.what());
  } catch (const InputError& e) {
    return fail(err, "input", e.what());
  } catch (const SingularPivotError& e) {
    return fail(err, "singular_pivot", e.what());
  } catch (const ResampleFailure& e) {
    return fail(err, "resample_failure", e.what());
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what());
  }
}

}  // namespace dagiso::cli
