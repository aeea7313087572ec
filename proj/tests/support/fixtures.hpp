#pragma once

// Small graphs that recur across the suites, plus test-only oracles that
// deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "dagiso/dag.hpp"
#include "dagiso/field.hpp"

namespace dagiso::testing {

inline Dag chain3() { return Dag(3, {{0, 1}, {1, 2}}); }
inline Dag fork3() { return Dag(3, {{0, 1}, {0, 2}}); }
inline Dag collider3() { return Dag(3, {{0, 2}, {1, 2}}); }
inline Dag complete3() { return Dag(3, {{0, 1}, {0, 2}, {1, 2}}); }
inline Dag edgeless(int n) { return Dag(n, {}); }
/// 1->2, 2->3, 2->4, 3->4 in 1-based labels.
inline Dag four_node_example() { return Dag(4, {{0, 1}, {1, 2}, {1, 3}, {2, 3}}); }
/// 1->2, 1->3, 2->4, 3->4 in 1-based labels.
inline Dag diamond() { return Dag(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

/// Leibniz expansion; exponential, for n <= 6.
template <class F>
typename F::Element leibniz_det(const F& field, const FieldMatrix<F>& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto total = field.zero();
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    auto term = field.one();
    for (std::size_t r = 0; r < n; ++r) term = field.mul(term, m(r, perm[r]));
    total = inversions % 2 ? field.sub(total, term) : field.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Rank as the largest k with a nonzero k x k minor (Leibniz on every pair of index subsets).
template <class F>
std::size_t minor_rank(const F& field, const FieldMatrix<F>& m) {
  const std::size_t r = m.rows(), c = m.cols();
  std::size_t best = 0;
  for (std::uint32_t rows = 1; rows < (1U << r); ++rows)
    for (std::uint32_t cols = 1; cols < (1U << c); ++cols) {
      const auto k = static_cast<std::size_t>(__builtin_popcount(rows));
      if (k != static_cast<std::size_t>(__builtin_popcount(cols)) || k <= best) continue;
      std::vector<int> ri, ci;
      for (std::size_t v = 0; v < r; ++v)
        if (rows >> v & 1U) ri.push_back(static_cast<int>(v));
      for (std::size_t v = 0; v < c; ++v)
        if (cols >> v & 1U) ci.push_back(static_cast<int>(v));
      if (!field.is_zero(leibniz_det(field, submatrix<typename F::Element, int>(m, ri, ci)))) best = k;
    }
  return best;
}

/// d-separation by enumerating every simple undirected path between i and j.
inline bool brute_force_d_separated(const Dag& g, Node i, Node j, const NodeSet& cond) {
  const int n = g.n();
  auto in_cond = [&](Node v) { return std::find(cond.begin(), cond.end(), v) != cond.end(); };
  std::vector<std::vector<bool>> reaches(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (Node v = 0; v < n; ++v) {
    std::vector<Node> stack{v};
    while (!stack.empty()) {
      const Node u = stack.back();
      stack.pop_back();
      if (reaches[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) continue;
      reaches[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
      for (Node c : g.children(u)) stack.push_back(c);
    }
  }
  auto opens_collider = [&](Node k) {
    return std::any_of(cond.begin(), cond.end(),
                       [&](Node c) { return reaches[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]; });
  };
  std::vector<Node> path{i};
  std::vector<bool> on_path(static_cast<std::size_t>(n), false);
  on_path[static_cast<std::size_t>(i)] = true;
  bool open_found = false;
  std::function<void()> walk = [&] {
    if (open_found) return;
    const Node last = path.back();
    if (last == j) {
      for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        const Node a = path[k - 1], v = path[k], b = path[k + 1];
        const bool collider = g.has_edge(a, v) && g.has_edge(b, v);
        if (collider ? !opens_collider(v) : in_cond(v)) return;
      }
      open_found = true;
      return;
    }
    for (Node next = 0; next < n; ++next) {
      if (on_path[static_cast<std::size_t>(next)] || !g.adjacent(last, next)) continue;
      on_path[static_cast<std::size_t>(next)] = true;
      path.push_back(next);
      walk();
      path.pop_back();
      on_path[static_cast<std::size_t>(next)] = false;
    }
  };
  walk();
  return !open_found;
}

}  // namespace dagiso::testing
