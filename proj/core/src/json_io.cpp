#include "dagiso/json_io.hpp"

#include <fstream>

#include "dagiso/errors.hpp"

namespace dagiso {

namespace {

int shift(bool one_based) { return one_based ? 1 : 0; }

Node node_from_json(const Json& j, bool one_based) {
  if (!j.is_number_integer()) throw InputError("node id must be an integer");
  return j.get<Node>() - shift(one_based);
}

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json dag_to_json(const Dag& g, bool one_based) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.parent + shift(one_based), e.child + shift(one_based)});
  return {{"n", g.n()}, {"edges", std::move(edges)}};
}

Dag dag_from_json(const Json& j, bool one_based) {
  const Json& n = field_of(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 0) throw InputError("\"n\" must be a non-negative integer");
  const Json& edges = field_of(j, "edges");
  if (!edges.is_array()) throw InputError("\"edges\" must be an array");
  std::vector<Edge> out;
  for (const Json& e : edges) {
    if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a [parent, child] pair");
    out.push_back({node_from_json(e[0], one_based), node_from_json(e[1], one_based)});
  }
  return Dag(n.get<int>(), std::move(out));
}

Json nodes_to_json(std::span<const Node> nodes, bool one_based) {
  Json out = Json::array();
  for (Node v : nodes) out.push_back(v + shift(one_based));
  return out;
}

Json permutation_to_json(const Permutation& p, bool one_based) { return nodes_to_json(p.map(), one_based); }

Json ci_to_json(const CiStatement& s, bool one_based) {
  return {{"i", s.i + shift(one_based)}, {"j", s.j + shift(one_based)}, {"cond", nodes_to_json(s.cond, one_based)}};
}

CiStatement ci_from_json(const Json& j, bool one_based) {
  CiStatement s;
  s.i = node_from_json(field_of(j, "i"), one_based);
  s.j = node_from_json(field_of(j, "j"), one_based);
  const Json& cond = field_of(j, "cond");
  if (!cond.is_array()) throw InputError("\"cond\" must be an array");
  for (const Json& v : cond) s.cond.push_back(node_from_json(v, one_based));
  return s;
}

Json minor_to_json(const MinorSpec& m, bool one_based) {
  return {{"rows", nodes_to_json(m.rows, one_based)}, {"cols", nodes_to_json(m.cols, one_based)}};
}

Json tree_relation_to_json(const TreeRelation& r, bool one_based) {
  Json out = {{"kind", r.kind == TreeRelation::Kind::kLinear ? "linear" : "quadratic"},
              {"i", r.i + shift(one_based)},
              {"j", r.j + shift(one_based)}};
  if (r.k) out["k"] = *r.k + shift(one_based);
  return out;
}

Json pattern_to_json(const Pattern& p, bool one_based) {
  Json skeleton = Json::array(), immoralities = Json::array();
  for (auto [a, b] : p.skeleton) skeleton.push_back({a + shift(one_based), b + shift(one_based)});
  for (const Immorality& m : p.immoralities)
    immoralities.push_back({m.i + shift(one_based), m.k + shift(one_based), m.j + shift(one_based)});
  return {{"n", p.n}, {"skeleton", std::move(skeleton)}, {"immoralities", std::move(immoralities)}};
}

Json rational_to_json(const mpq_class& q) { return q.get_str(); }

Json point_to_json(const FpPoint& p) {
  Json mat = Json::array();
  for (std::size_t r = 0; r < p.mat.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < p.mat.cols(); ++c) row.push_back(p.mat(r, c));
    mat.push_back(std::move(row));
  }
  return {{"q", p.field.modulus()}, {"mat", std::move(mat)}};
}

Json point_to_json(const RationalPoint& p) {
  Json mat = Json::array();
  for (std::size_t r = 0; r < p.mat.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < p.mat.cols(); ++c) row.push_back(rational_to_json(p.mat(r, c)));
    mat.push_back(std::move(row));
  }
  return {{"q", "rational"}, {"mat", std::move(mat)}};
}

namespace {

mpq_class entry_from_json(const Json& e) {
  if (e.is_number_integer()) return mpq_class(e.get<long>());
  if (e.is_string()) return parse_rational(e.get<std::string>());
  throw InputError("matrix entries must be integers or rational strings");
}

const Json& matrix_rows(const Json& j) {
  const Json& mat = j.is_array() ? j : field_of(j, "mat");
  if (!mat.is_array()) throw InputError("\"mat\" must be an array of rows");
  for (const Json& row : mat)
    if (!row.is_array() || row.size() != mat.size()) throw InputError("\"mat\" must be square");
  return mat;
}

}  // namespace

FieldMatrix<RationalField> rational_matrix_from_json(const Json& j) {
  const Json& mat = matrix_rows(j);
  const std::size_t n = mat.size();
  FieldMatrix<RationalField> out(n, n, mpq_class(0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = entry_from_json(mat[r][c]);
  return out;
}

FpPoint fp_point_from_json(const Json& j) {
  const Json& q = field_of(j, "q");
  if (!q.is_number_unsigned() && !q.is_number_integer()) throw InputError("\"q\" must be a prime modulus");
  const PrimeField field(q.get<std::uint64_t>());
  const Json& mat = matrix_rows(j);
  const std::size_t n = mat.size();
  FieldMatrix<PrimeField> out(n, n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (!mat[r][c].is_number_integer()) throw InputError("finite-field entries must be integers");
      out(r, c) = field.from_int(mat[r][c].get<std::int64_t>());
    }
  return make_sym_point(field, std::move(out));
}

Json verdict_to_json(const IsoVerdict& v, bool one_based) {
  Json out = {
      {"answer", v.answer ? "yes" : "no"},
      {"test", v.with_permutations ? "isomorphism" : "equivalence"},
      {"rounds_run", v.rounds_run},
      {"reason", v.reason},
      {"params", {{"m", v.params.m}, {"q", v.params.q}, {"d_bound", v.params.d_bound}, {"seed", v.params.seed}}},
  };
  if (v.refuting_round) out["refuting_round"] = *v.refuting_round;
  if (v.answer) {
    Json w = Json::array();
    for (const auto& r : v.witnesses)
      w.push_back({{"forward", permutation_to_json(r.forward, one_based)},
                   {"backward", permutation_to_json(r.backward, one_based)}});
    out["witnesses"] = std::move(w);
    out["failure_bound"] = {
        {"value", rational_to_json(v.bound.value)},
        {"approx", v.bound.value.get_d()},
        {"vacuous", v.bound.vacuous},
        {"kind", "heuristic: per-round formula with a surrogate degree bound"},
    };
  }
  return out;
}

const char* mode_name(ClassifyMode mode) {
  switch (mode) {
    case ClassifyMode::kOracle:
      return "oracle";
    case ClassifyMode::kRandomized:
      return "randomized";
    case ClassifyMode::kCrossCheck:
      return "cross-check";
  }
  return "unknown";
}

ClassifyMode mode_from_name(const std::string& name) {
  if (name == "oracle") return ClassifyMode::kOracle;
  if (name == "randomized") return ClassifyMode::kRandomized;
  if (name == "cross-check") return ClassifyMode::kCrossCheck;
  throw InputError("unknown mode \"" + name + "\" (expected oracle, randomized or cross-check)");
}

Json report_to_json(const ClassReport& r, bool one_based) {
  Json reps = Json::array();
  for (const Dag& g : r.representatives) reps.push_back(dag_to_json(g, one_based));
  return {
      {"n", r.n},
      {"mode", mode_name(r.mode)},
      {"class_count", r.class_count},
      {"class_sizes", r.class_sizes},
      {"total_labeled", r.total},
      {"isodag_calls", r.isodag_calls},
      {"representatives", std::move(reps)},
  };
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace dagiso
