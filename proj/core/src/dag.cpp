#include "dagiso/dag.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

#include "dagiso/errors.hpp"

namespace dagiso {

Permutation::Permutation(std::vector<Node> map) : map_(std::move(map)) {
  std::vector<bool> seen(map_.size(), false);
  for (Node v : map_) {
    if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || seen[static_cast<std::size_t>(v)])
      throw InputError("permutation is not a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<Node> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::swap(int n, Node a, Node b) {
  auto p = identity(n).map_;
  std::swap(p.at(static_cast<std::size_t>(a)), p.at(static_cast<std::size_t>(b)));
  return Permutation(std::move(p));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t v = 0; v < map_.size(); ++v)
    if (map_[v] != static_cast<Node>(v)) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<Node> inv(map_.size());
  for (std::size_t v = 0; v < map_.size(); ++v) inv[static_cast<std::size_t>(map_[v])] = static_cast<Node>(v);
  return Permutation(std::move(inv));
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw InputError("composing permutations of different sizes");
  std::vector<Node> m(map_.size());
  for (std::size_t v = 0; v < map_.size(); ++v) m[v] = next(map_[v]);
  return Permutation(std::move(m));
}

std::optional<TopoOrder> try_topo_sort(int n, std::span<const Edge> edges) {
  const auto size = static_cast<std::size_t>(n);
  std::vector<int> indegree(size, 0);
  std::vector<std::vector<Node>> out(size);
  for (const Edge& e : edges) {
    out[static_cast<std::size_t>(e.parent)].push_back(e.child);
    ++indegree[static_cast<std::size_t>(e.child)];
  }
  std::priority_queue<Node, std::vector<Node>, std::greater<>> ready;
  for (Node v = 0; v < n; ++v)
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
  TopoOrder t;
  t.order.reserve(size);
  t.position.assign(size, -1);
  while (!ready.empty()) {
    const Node v = ready.top();
    ready.pop();
    t.position[static_cast<std::size_t>(v)] = static_cast<int>(t.order.size());
    t.order.push_back(v);
    for (Node c : out[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
  }
  if (t.order.size() != size) return std::nullopt;
  return t;
}

Dag::Dag(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw InputError("negative node count");
  const auto size = static_cast<std::size_t>(n);
  adj_.assign(size * size, 0);
  parents_.resize(size);
  children_.resize(size);
  for (const Edge& e : edges_) {
    if (e.parent < 0 || e.parent >= n || e.child < 0 || e.child >= n)
      throw InputError("edge (" + std::to_string(e.parent) + "," + std::to_string(e.child) +
                       ") references a node outside 0.." + std::to_string(n - 1));
    if (e.parent == e.child) throw InputError("self-loop on node " + std::to_string(e.parent));
    auto& cell = adj_[static_cast<std::size_t>(e.parent) * size + static_cast<std::size_t>(e.child)];
    if (cell) throw InputError("duplicate edge (" + std::to_string(e.parent) + "," + std::to_string(e.child) + ")");
    cell = 1;
  }
  std::sort(edges_.begin(), edges_.end());
  if (!try_topo_sort(n, edges_)) throw InputError("graph has a directed cycle; not a DAG");
  for (const Edge& e : edges_) {
    parents_[static_cast<std::size_t>(e.child)].push_back(e.parent);
    children_[static_cast<std::size_t>(e.parent)].push_back(e.child);
  }
  for (auto& c : children_) std::sort(c.begin(), c.end());
}

TopoOrder topo_sort(const Dag& g) { return *try_topo_sort(g.n(), g.edges()); }

bool is_topological(const Dag& g, std::span<const Node> order) {
  if (order.size() != static_cast<std::size_t>(g.n())) return false;
  std::vector<int> pos(order.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Node v = order[k];
    if (v < 0 || v >= g.n() || pos[static_cast<std::size_t>(v)] != -1) return false;
    pos[static_cast<std::size_t>(v)] = static_cast<int>(k);
  }
  return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return pos[static_cast<std::size_t>(e.parent)] < pos[static_cast<std::size_t>(e.child)];
  });
}

NodeSet descendants(const Dag& g, Node i) {
  if (i < 0 || i >= g.n()) throw InputError("node out of range");
  std::vector<bool> seen(static_cast<std::size_t>(g.n()), false);
  std::vector<Node> stack{i};
  while (!stack.empty()) {
    const Node v = stack.back();
    stack.pop_back();
    for (Node c : g.children(v))
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
  }
  NodeSet out;
  for (Node v = 0; v < g.n(); ++v)
    if (seen[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

NodeSet nondescendants(const Dag& g, Node i) {
  const NodeSet desc = descendants(g, i);
  NodeSet out;
  for (Node v = 0; v < g.n(); ++v)
    if (v != i && !std::binary_search(desc.begin(), desc.end(), v)) out.push_back(v);
  return out;
}

Dag apply_permutation(const Dag& g, const Permutation& p) {
  if (p.size() != g.n()) throw InputError("permutation size does not match node count");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({p(e.parent), p(e.child)});
  return Dag(g.n(), std::move(edges));
}

Pattern pattern(const Dag& g) {
  Pattern p;
  p.n = g.n();
  for (const Edge& e : g.edges()) p.skeleton.emplace_back(std::min(e.parent, e.child), std::max(e.parent, e.child));
  std::sort(p.skeleton.begin(), p.skeleton.end());
  for (Node k = 0; k < g.n(); ++k) {
    const auto pa = g.parents(k);
    for (std::size_t a = 0; a < pa.size(); ++a)
      for (std::size_t b = a + 1; b < pa.size(); ++b)
        if (!g.adjacent(pa[a], pa[b])) p.immoralities.push_back({pa[a], k, pa[b]});
  }
  std::sort(p.immoralities.begin(), p.immoralities.end());
  return p;
}

Pattern relabel(const Pattern& p, const Permutation& perm) {
  if (perm.size() != p.n) throw InputError("permutation size does not match pattern");
  Pattern out;
  out.n = p.n;
  for (auto [a, b] : p.skeleton) {
    const Node x = perm(a), y = perm(b);
    out.skeleton.emplace_back(std::min(x, y), std::max(x, y));
  }
  for (const Immorality& m : p.immoralities) {
    const Node x = perm(m.i), y = perm(m.j);
    out.immoralities.push_back({std::min(x, y), perm(m.k), std::max(x, y)});
  }
  std::sort(out.skeleton.begin(), out.skeleton.end());
  std::sort(out.immoralities.begin(), out.immoralities.end());
  return out;
}

std::vector<int> skeleton_degrees(const Pattern& p) {
  std::vector<int> deg(static_cast<std::size_t>(p.n), 0);
  for (auto [a, b] : p.skeleton) {
    ++deg[static_cast<std::size_t>(a)];
    ++deg[static_cast<std::size_t>(b)];
  }
  return deg;
}

namespace {

std::vector<std::uint8_t> adjacency(const Pattern& p) {
  const auto n = static_cast<std::size_t>(p.n);
  std::vector<std::uint8_t> adj(n * n, 0);
  for (auto [a, b] : p.skeleton) {
    adj[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = 1;
    adj[static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a)] = 1;
  }
  return adj;
}

}  // namespace

std::optional<Permutation> pattern_isomorphic(const Pattern& p1, const Pattern& p2) {
  if (p1.n != p2.n || p1.skeleton.size() != p2.skeleton.size() ||
      p1.immoralities.size() != p2.immoralities.size())
    return std::nullopt;
  const int n = p1.n;
  const auto un = static_cast<std::size_t>(n);
  const auto deg1 = skeleton_degrees(p1), deg2 = skeleton_degrees(p2);
  {
    auto s1 = deg1, s2 = deg2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return std::nullopt;
  }
  const auto adj1 = adjacency(p1), adj2 = adjacency(p2);

  std::vector<Node> image(un, -1);
  std::vector<bool> used(un, false);
  std::optional<Permutation> found;

  std::function<void(Node)> extend = [&](Node v) {
    if (found) return;
    if (v == n) {
      Permutation perm(image);
      if (relabel(p1, perm).immoralities == p2.immoralities) found = std::move(perm);
      return;
    }
    for (Node t = 0; t < n && !found; ++t) {
      if (used[static_cast<std::size_t>(t)] || deg1[static_cast<std::size_t>(v)] != deg2[static_cast<std::size_t>(t)])
        continue;
      bool ok = true;
      for (Node u = 0; u < v && ok; ++u) {
        const Node tu = image[static_cast<std::size_t>(u)];
        ok = adj1[static_cast<std::size_t>(u) * un + static_cast<std::size_t>(v)] ==
             adj2[static_cast<std::size_t>(tu) * un + static_cast<std::size_t>(t)];
      }
      if (!ok) continue;
      image[static_cast<std::size_t>(v)] = t;
      used[static_cast<std::size_t>(t)] = true;
      extend(v + 1);
      used[static_cast<std::size_t>(t)] = false;
    }
  };
  extend(0);
  return found;
}

std::vector<Dag> enumerate_all_dags(int n) {
  if (n < 0 || n > 5) throw SizeGuardError("enumerate_all_dags supports 0 <= n <= 5");
  std::vector<Edge> pairs;
  for (Node u = 0; u < n; ++u)
    for (Node v = 0; v < n; ++v)
      if (u != v) pairs.push_back({u, v});
  std::vector<Dag> out;
  const std::uint64_t limit = 1ULL << pairs.size();
  std::vector<Edge> edges;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    edges.clear();
    bool two_cycle = false;
    for (std::size_t b = 0; b < pairs.size() && !two_cycle; ++b) {
      if (!(mask >> b & 1ULL)) continue;
      const Edge e = pairs[b];
      for (const Edge& f : edges)
        if (f.parent == e.child && f.child == e.parent) two_cycle = true;
      edges.push_back(e);
    }
    if (two_cycle || !try_topo_sort(n, edges)) continue;
    out.emplace_back(n, edges);
  }
  return out;
}

Dag random_dag(int n, std::size_t edge_count, Rng& rng) {
  const auto un = static_cast<std::size_t>(n);
  if (n < 0 || edge_count > (un < 2 ? 0 : un * (un - 1) / 2))
    throw InputError("too many edges requested for random DAG");
  std::vector<Node> order(un);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  // Partial Fisher-Yates over the n(n-1)/2 forward pairs, indexed lazily.
  const std::size_t total = un < 2 ? 0 : un * (un - 1) / 2;
  std::vector<std::size_t> picks;
  picks.reserve(edge_count);
  if (edge_count * 4 < total) {
    std::vector<bool> taken(total, false);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    while (picks.size() < edge_count) {
      const std::size_t k = pick(rng);
      if (!taken[k]) {
        taken[k] = true;
        picks.push_back(k);
      }
    }
  } else {
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t k = 0; k < edge_count; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, total - 1);
      std::swap(all[k], all[pick(rng)]);
    }
    picks.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(edge_count));
  }
  std::vector<Edge> edges;
  edges.reserve(edge_count);
  for (std::size_t k : picks) {
    // Decode k into a pair (a, b), a < b, in row-major order of the upper triangle.
    std::size_t a = 0, row = un - 1, rest = k;
    while (rest >= row) {
      rest -= row;
      ++a;
      --row;
    }
    const std::size_t b = a + 1 + rest;
    edges.push_back({order[a], order[b]});
  }
  return Dag(n, std::move(edges));
}

}  // namespace dagiso
