#include "dagiso/ci.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dagiso/errors.hpp"

namespace dagiso {

CiStatement CiStatement::normalized() const {
  CiStatement s{std::min(i, j), std::max(i, j), cond};
  std::sort(s.cond.begin(), s.cond.end());
  return s;
}

MinorSpec minor_of(const CiStatement& s) {
  MinorSpec m;
  NodeSet k = s.cond;
  std::sort(k.begin(), k.end());
  m.rows.push_back(s.i);
  m.cols.push_back(s.j);
  m.rows.insert(m.rows.end(), k.begin(), k.end());
  m.cols.insert(m.cols.end(), k.begin(), k.end());
  return m;
}

bool d_separated(const Dag& g, Node i, Node j, std::span<const Node> cond) {
  const int n = g.n();
  auto in_range = [n](Node v) { return v >= 0 && v < n; };
  if (!in_range(i) || !in_range(j)) throw InputError("d-separation query node out of range");
  if (i == j) throw InputError("d-separation query needs i != j");
  const auto un = static_cast<std::size_t>(n);
  std::vector<bool> observed(un, false);
  for (Node c : cond) {
    if (!in_range(c)) throw InputError("conditioning node out of range");
    if (c == i || c == j) throw InputError("conditioning set overlaps {i, j}");
    observed[static_cast<std::size_t>(c)] = true;
  }

  // Observed nodes and their ancestors: colliders here are open.
  std::vector<bool> opens_collider(un, false);
  std::vector<Node> stack(cond.begin(), cond.end());
  while (!stack.empty()) {
    const Node v = stack.back();
    stack.pop_back();
    if (opens_collider[static_cast<std::size_t>(v)]) continue;
    opens_collider[static_cast<std::size_t>(v)] = true;
    for (Node p : g.parents(v)) stack.push_back(p);
  }

  // Active-trail search over (node, arrived-from-child?) states.
  std::vector<bool> seen_up(un, false), seen_down(un, false);
  std::vector<std::pair<Node, bool>> frontier{{i, true}};
  while (!frontier.empty()) {
    const auto [v, up] = frontier.back();
    frontier.pop_back();
    auto& seen = up ? seen_up : seen_down;
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = true;
    const bool obs = observed[static_cast<std::size_t>(v)];
    if (!obs && v == j) return false;
    if (up) {
      if (obs) continue;
      for (Node p : g.parents(v)) frontier.emplace_back(p, true);
      for (Node c : g.children(v)) frontier.emplace_back(c, false);
    } else {
      if (!obs)
        for (Node c : g.children(v)) frontier.emplace_back(c, false);
      if (opens_collider[static_cast<std::size_t>(v)])
        for (Node p : g.parents(v)) frontier.emplace_back(p, true);
    }
  }
  return true;
}

std::vector<CiStatement> toposorted_imposed(const Dag& g) {
  const TopoOrder topo = topo_sort(g);
  std::vector<CiStatement> out;
  for (std::size_t pos = 0; pos < topo.order.size(); ++pos) {
    const Node i = topo.order[pos];
    const auto pa = g.parents(i);
    const NodeSet k(pa.begin(), pa.end());
    for (std::size_t prev = 0; prev < pos; ++prev) {
      const Node j = topo.order[prev];
      if (!std::binary_search(k.begin(), k.end(), j)) out.push_back({i, j, k});
    }
  }
  return out;
}

namespace {

void require_enumerable(const Dag& g) {
  if (g.n() > kMaxEnumerationNodes)
    throw SizeGuardError("conditioning-set enumeration supports n <= " +
                         std::to_string(kMaxEnumerationNodes) + ", got n = " + std::to_string(g.n()));
}

}  // namespace

std::vector<CiStatement> implied_relations(const Dag& g) {
  require_enumerable(g);
  const int n = g.n();
  std::vector<CiStatement> out;
  NodeSet rest;
  NodeSet cond;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j) {
      rest.clear();
      for (Node v = 0; v < n; ++v)
        if (v != i && v != j) rest.push_back(v);
      std::vector<CiStatement> pair_out;
      const std::uint32_t limit = 1U << rest.size();
      for (std::uint32_t mask = 0; mask < limit; ++mask) {
        cond.clear();
        for (std::size_t b = 0; b < rest.size(); ++b)
          if (mask >> b & 1U) cond.push_back(rest[b]);
        if (d_separated(g, i, j, cond)) pair_out.push_back({i, j, cond});
      }
      std::sort(pair_out.begin(), pair_out.end(), [](const CiStatement& a, const CiStatement& b) {
        if (a.cond.size() != b.cond.size()) return a.cond.size() < b.cond.size();
        return a.cond < b.cond;
      });
      out.insert(out.end(), pair_out.begin(), pair_out.end());
    }
  return out;
}

std::vector<MinorSpec> imposed_minors(const Dag& g) {
  std::vector<MinorSpec> out;
  for (const CiStatement& s : toposorted_imposed(g)) out.push_back(minor_of(s));
  return out;
}

bool is_forest(const Dag& g) {
  std::vector<Node> root(static_cast<std::size_t>(g.n()));
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](Node v) {
    while (root[static_cast<std::size_t>(v)] != v) {
      root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
      v = root[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const Edge& e : g.edges()) {
    const Node a = find(e.parent), b = find(e.child);
    if (a == b) return false;
    root[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

std::vector<TreeRelation> tree_reduced_generators(const Dag& t) {
  if (!is_forest(t)) throw InputError("tree_reduced_generators requires an undirected forest");
  std::vector<TreeRelation> out;
  for (const CiStatement& s : toposorted_imposed(t)) {
    if (d_separated(t, s.i, s.j, {})) {
      out.push_back({TreeRelation::Kind::kLinear, s.i, s.j, std::nullopt});
      continue;
    }
    // On a forest the unique open path leaves i through one parent.
    bool emitted = false;
    for (Node k : s.cond) {
      const Node single[] = {k};
      if (d_separated(t, s.i, s.j, single)) {
        out.push_back({TreeRelation::Kind::kQuadratic, s.i, s.j, k});
        emitted = true;
        break;
      }
    }
    if (!emitted) throw std::logic_error("forest statement without a single-node separator");
  }
  return out;
}

std::vector<CiStatement> marginal_implied(const Dag& g, std::span<const Node> removed) {
  require_enumerable(g);
  std::vector<bool> gone(static_cast<std::size_t>(g.n()), false);
  for (Node v : removed) {
    if (v < 0 || v >= g.n()) throw InputError("marginalized node out of range");
    gone[static_cast<std::size_t>(v)] = true;
  }
  auto survives = [&](Node v) { return !gone[static_cast<std::size_t>(v)]; };
  std::vector<CiStatement> out;
  for (CiStatement& s : implied_relations(g))
    if (survives(s.i) && survives(s.j) && std::all_of(s.cond.begin(), s.cond.end(), survives))
      out.push_back(std::move(s));
  return out;
}

bool lies_below_ci(const Dag& m, const Dag& g, std::span<const Node> embed) {
  if (m.n() > g.n()) throw InputError("embedded model has more nodes than the host");
  if (embed.size() != static_cast<std::size_t>(m.n()))
    throw InputError("embedding must map every node of the embedded model");
  std::vector<bool> hit(static_cast<std::size_t>(g.n()), false);
  for (Node v : embed) {
    if (v < 0 || v >= g.n()) throw InputError("embedding target out of range");
    if (hit[static_cast<std::size_t>(v)]) throw InputError("embedding is not injective");
    hit[static_cast<std::size_t>(v)] = true;
  }
  auto at = [&](Node v) { return embed[static_cast<std::size_t>(v)]; };
  NodeSet cond;
  for (const CiStatement& s : toposorted_imposed(m)) {
    cond.clear();
    for (Node k : s.cond) cond.push_back(at(k));
    std::sort(cond.begin(), cond.end());
    if (!d_separated(g, at(s.i), at(s.j), cond)) return false;
  }
  return true;
}

}  // namespace dagiso
