#include "dagiso/classify.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "dagiso/errors.hpp"
#include "dagiso/json_io.hpp"

namespace dagiso {

std::uint64_t tree_dag_count(int n) {
  if (n < 1) return 0;
  if (n == 1) return 1;
  std::uint64_t count = 1;
  for (int k = 0; k < n - 2; ++k) count *= static_cast<std::uint64_t>(n);
  return count << (n - 1);
}

std::vector<std::pair<Node, Node>> pruefer_decode(int n, std::span<const Node> sequence) {
  if (n < 2 || sequence.size() != static_cast<std::size_t>(n - 2))
    throw InputError("Pruefer sequence must have length n - 2");
  const auto un = static_cast<std::size_t>(n);
  std::vector<int> degree(un, 1);
  for (Node v : sequence) {
    if (v < 0 || v >= n) throw InputError("Pruefer entry out of range");
    ++degree[static_cast<std::size_t>(v)];
  }
  std::priority_queue<Node, std::vector<Node>, std::greater<>> leaves;
  for (Node v = 0; v < n; ++v)
    if (degree[static_cast<std::size_t>(v)] == 1) leaves.push(v);
  std::vector<std::pair<Node, Node>> edges;
  for (Node v : sequence) {
    const Node leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
    if (--degree[static_cast<std::size_t>(v)] == 1) leaves.push(v);
  }
  const Node a = leaves.top();
  leaves.pop();
  const Node b = leaves.top();
  edges.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(edges.begin(), edges.end());
  return edges;
}

void for_each_tree_dag(int n, const std::function<void(const Dag&)>& visit) {
  if (n < 1 || n > kMaxTreeNodes)
    throw SizeGuardError("tree enumeration supports 1 <= n <= " + std::to_string(kMaxTreeNodes));
  if (n == 1) {
    visit(Dag(1, {}));
    return;
  }
  std::vector<Node> sequence(static_cast<std::size_t>(n - 2), 0);
  std::vector<Edge> edges(static_cast<std::size_t>(n - 1));
  while (true) {
    const auto tree = pruefer_decode(n, sequence);
    for (std::uint32_t mask = 0; mask < (1U << (n - 1)); ++mask) {
      for (std::size_t e = 0; e < tree.size(); ++e) {
        const auto [a, b] = tree[e];
        edges[e] = (mask >> e & 1U) ? Edge{b, a} : Edge{a, b};
      }
      visit(Dag(n, edges));
    }
    // Next sequence in lexicographic order.
    std::size_t k = sequence.size();
    while (k > 0 && sequence[k - 1] == n - 1) sequence[--k] = 0;
    if (k == 0) break;
    ++sequence[k - 1];
  }
}

namespace {

using Code = std::vector<int>;

// Flattened pattern under a labeling: n, skeleton pairs, -1, immorality triples.
void encode(const Pattern& p, std::span<const Node> label, std::vector<std::pair<int, int>>& pairs,
            std::vector<std::array<int, 3>>& triples, Code& out) {
  pairs.clear();
  triples.clear();
  for (auto [a, b] : p.skeleton) {
    const int x = label[static_cast<std::size_t>(a)], y = label[static_cast<std::size_t>(b)];
    pairs.emplace_back(std::min(x, y), std::max(x, y));
  }
  for (const Immorality& m : p.immoralities) {
    const int x = label[static_cast<std::size_t>(m.i)], y = label[static_cast<std::size_t>(m.j)];
    triples.push_back({std::min(x, y), label[static_cast<std::size_t>(m.k)], std::max(x, y)});
  }
  std::sort(pairs.begin(), pairs.end());
  std::sort(triples.begin(), triples.end());
  out.clear();
  out.push_back(p.n);
  for (auto [a, b] : pairs) {
    out.push_back(a);
    out.push_back(b);
  }
  out.push_back(-1);
  for (const auto& t : triples) out.insert(out.end(), t.begin(), t.end());
}

// Iterated color refinement on an isomorphism-invariant initial coloring.
std::vector<int> refine_colors(const Pattern& p) {
  const auto n = static_cast<std::size_t>(p.n);
  std::vector<std::vector<Node>> nbrs(n);
  for (auto [a, b] : p.skeleton) {
    nbrs[static_cast<std::size_t>(a)].push_back(b);
    nbrs[static_cast<std::size_t>(b)].push_back(a);
  }
  // tip_at[k] holds the nodes that are tips of an immorality centered at k.
  std::vector<std::vector<Node>> tip_at(n);
  std::vector<int> centered(n, 0), tipped(n, 0);
  for (const Immorality& m : p.immoralities) {
    ++centered[static_cast<std::size_t>(m.k)];
    ++tipped[static_cast<std::size_t>(m.i)];
    ++tipped[static_cast<std::size_t>(m.j)];
    tip_at[static_cast<std::size_t>(m.k)].push_back(m.i);
    tip_at[static_cast<std::size_t>(m.k)].push_back(m.j);
  }
  for (auto& t : tip_at) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  auto is_tip = [&](Node k, Node u) {
    const auto& t = tip_at[static_cast<std::size_t>(k)];
    return std::binary_search(t.begin(), t.end(), u);
  };

  using Signature = std::vector<int>;
  std::vector<Signature> sig(n);
  for (std::size_t v = 0; v < n; ++v)
    sig[v] = {static_cast<int>(nbrs[v].size()), centered[v], tipped[v]};
  std::vector<int> color(n, 0);
  std::size_t classes = 0;
  while (true) {
    std::vector<Signature> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t v = 0; v < n; ++v)
      color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
    if (sorted.size() == classes) break;
    classes = sorted.size();
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::array<int, 2>> around;
      for (Node u : nbrs[v]) {
        const int mark = (is_tip(static_cast<Node>(v), u) ? 1 : 0) | (is_tip(u, static_cast<Node>(v)) ? 2 : 0);
        around.push_back({color[static_cast<std::size_t>(u)], mark});
      }
      std::sort(around.begin(), around.end());
      Signature s{color[v]};
      for (const auto& a : around) s.insert(s.end(), a.begin(), a.end());
      sig[v] = std::move(s);
    }
  }
  return color;
}

}  // namespace

std::string canonical_pattern(const Pattern& p) {
  if (p.n > kMaxCanonicalNodes)
    throw SizeGuardError("canonical form supports n <= " + std::to_string(kMaxCanonicalNodes));
  const auto n = static_cast<std::size_t>(p.n);
  const std::vector<int> color = refine_colors(p);

  // Cells in color order; labels are handed out cell by cell.
  std::vector<std::vector<Node>> cells;
  {
    std::map<int, std::vector<Node>> by_color;
    for (std::size_t v = 0; v < n; ++v) by_color[color[v]].push_back(static_cast<Node>(v));
    for (auto& [c, members] : by_color) cells.push_back(std::move(members));
  }

  std::vector<Node> label(n, 0);
  Code best, current;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::array<int, 3>> triples;
  bool have_best = false;

  std::function<void(std::size_t, int)> walk = [&](std::size_t cell, int next_label) {
    if (cell == cells.size()) {
      encode(p, label, pairs, triples, current);
      if (!have_best || current < best) {
        best.swap(current);
        have_best = true;
      }
      return;
    }
    auto& members = cells[cell];
    std::sort(members.begin(), members.end());
    do {
      for (std::size_t k = 0; k < members.size(); ++k)
        label[static_cast<std::size_t>(members[k])] = next_label + static_cast<int>(k);
      walk(cell + 1, next_label + static_cast<int>(members.size()));
    } while (std::next_permutation(members.begin(), members.end()));
  };
  walk(0, 0);
  if (!have_best) encode(p, label, pairs, triples, best);

  std::string out;
  out.reserve(best.size());
  for (int v : best) out.push_back(static_cast<char>(v < 0 ? 0xff : v));
  return out;
}

std::string canonical_pattern(const Dag& g) { return canonical_pattern(pattern(g)); }

namespace {

struct LabeledClass {
  std::vector<Edge> rep;  // lexicographically least member
  std::uint64_t count = 0;
};

std::string labeled_key(const Pattern& p) {
  std::string key;
  for (auto [a, b] : p.skeleton) {
    key.push_back(static_cast<char>(a));
    key.push_back(static_cast<char>(b));
  }
  key.push_back('\xff');
  for (const Immorality& m : p.immoralities) {
    key.push_back(static_cast<char>(m.i));
    key.push_back(static_cast<char>(m.k));
    key.push_back(static_cast<char>(m.j));
  }
  return key;
}

std::string bucket_key(const Pattern& p) {
  auto deg = skeleton_degrees(p);
  std::sort(deg.begin(), deg.end());
  std::string key(deg.begin(), deg.end());
  key.push_back('\xff');
  key += std::to_string(p.immoralities.size());
  return key;
}

// Partition of labeled patterns: class id per entry, in entry order.
using Partition = std::vector<std::size_t>;

struct Entries {
  std::vector<std::string> keys;  // sorted labeled keys
  std::vector<LabeledClass> members;
  std::map<std::string, std::vector<std::size_t>> buckets;  // bucket key -> entry indices
};

Entries collect(int n, std::uint64_t& total) {
  std::unordered_map<std::string, LabeledClass> labeled;
  total = 0;
  for_each_tree_dag(n, [&](const Dag& g) {
    ++total;
    auto& entry = labeled[labeled_key(pattern(g))];
    const std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    if (entry.count == 0 || edges < entry.rep) entry.rep = edges;
    ++entry.count;
  });
  Entries out;
  out.keys.reserve(labeled.size());
  for (auto& [k, v] : labeled) out.keys.push_back(k);
  std::sort(out.keys.begin(), out.keys.end());
  out.members.reserve(out.keys.size());
  for (std::size_t e = 0; e < out.keys.size(); ++e) {
    out.members.push_back(std::move(labeled[out.keys[e]]));
    out.buckets[bucket_key(pattern(Dag(n, out.members.back().rep)))].push_back(e);
  }
  return out;
}

Partition oracle_partition(int n, const Entries& entries, std::size_t& classes) {
  Partition part(entries.members.size());
  std::map<std::string, std::size_t> ids;
  for (const auto& [bucket, indices] : entries.buckets) {
    for (std::size_t e : indices) {
      const std::string canon = canonical_pattern(Dag(n, entries.members[e].rep));
      auto [it, fresh] = ids.try_emplace(canon, ids.size());
      part[e] = it->second;
    }
  }
  classes = ids.size();
  return part;
}

Partition randomized_partition(int n, const Entries& entries, const ClassifyOptions& options,
                               std::size_t& classes, std::uint64_t& calls) {
  Partition part(entries.members.size());
  classes = 0;
  calls = 0;
  for (const auto& [bucket, indices] : entries.buckets) {
    std::vector<std::pair<std::size_t, Dag>> reps;  // (class id, representative)
    for (std::size_t e : indices) {
      const Dag g(n, entries.members[e].rep);
      bool placed = false;
      for (const auto& [id, rep] : reps) {
        const IsoParams params = make_params(g, rep, options.m, options.q, derive_seed(options.seed, calls++));
        if (isodag_test(g, rep, params).answer) {
          part[e] = id;
          placed = true;
          break;
        }
      }
      if (!placed) {
        part[e] = classes;
        reps.emplace_back(classes++, g);
      }
    }
  }
  return part;
}

void check_agreement(int n, const Entries& entries, const Partition& oracle, const Partition& randomized) {
  // Same partition iff the id maps are mutually consistent.
  std::map<std::size_t, std::size_t> fwd, bwd;
  std::map<std::size_t, std::size_t> first_o, first_r;
  for (std::size_t e = 0; e < oracle.size(); ++e) {
    const auto [f, f_new] = fwd.try_emplace(oracle[e], randomized[e]);
    const auto [b, b_new] = bwd.try_emplace(randomized[e], oracle[e]);
    first_o.try_emplace(oracle[e], e);
    first_r.try_emplace(randomized[e], e);
    if (f->second == randomized[e] && b->second == oracle[e]) continue;
    // Offending pair: e and the earlier entry it was grouped with (or split from).
    const std::size_t other = f->second != randomized[e] ? first_o[oracle[e]] : first_r[randomized[e]];
    nlohmann::json detail = {
        {"n", n},
        {"first", dag_to_json(Dag(n, entries.members[other].rep))},
        {"second", dag_to_json(Dag(n, entries.members[e].rep))},
        {"oracle_isomorphic", oracle[other] == oracle[e]},
        {"randomized_isomorphic", randomized[other] == randomized[e]},
    };
    throw CrossCheckFailure("oracle and randomized classifications disagree: " + detail.dump());
  }
}

}  // namespace

ClassReport classify_trees(int n, ClassifyMode mode, const ClassifyOptions& options) {
  if (n < 1 || n > kMaxTreeNodes)
    throw SizeGuardError("tree classification supports 1 <= n <= " + std::to_string(kMaxTreeNodes));
  ClassReport report;
  report.n = n;
  report.mode = mode;
  const Entries entries = collect(n, report.total);

  Partition part;
  std::size_t classes = 0;
  if (mode == ClassifyMode::kOracle) {
    part = oracle_partition(n, entries, classes);
  } else {
    part = randomized_partition(n, entries, options, classes, report.isodag_calls);
    if (mode == ClassifyMode::kCrossCheck) {
      std::size_t oracle_classes = 0;
      const Partition oracle = oracle_partition(n, entries, oracle_classes);
      check_agreement(n, entries, oracle, part);
    }
  }

  std::vector<LabeledClass> acc(classes);
  for (std::size_t e = 0; e < part.size(); ++e) {
    auto& c = acc[part[e]];
    const auto& member = entries.members[e];
    if (c.count == 0 || member.rep < c.rep) c.rep = member.rep;
    c.count += member.count;
  }
  std::sort(acc.begin(), acc.end(), [](const LabeledClass& a, const LabeledClass& b) { return a.rep < b.rep; });
  report.class_count = acc.size();
  for (auto& c : acc) {
    report.representatives.emplace_back(n, std::move(c.rep));
    report.class_sizes.push_back(c.count);
  }
  return report;
}

}  // namespace dagiso
