#pragma once

// Directed acyclic graphs, relabelings, and the pattern (skeleton plus
// immoralities) used as the deterministic equivalence oracle.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dagiso/rng.hpp"

namespace dagiso {

using Node = int;
/// Sorted, duplicate-free set of node ids.
using NodeSet = std::vector<Node>;

struct Edge {
  Node parent;
  Node child;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bijection of {0..n-1}. Acts on a graph by sending node v to map[v].
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `map` is a bijection of {0..size-1}.
  explicit Permutation(std::vector<Node> map);
  static Permutation identity(int n);
  static Permutation swap(int n, Node a, Node b);

  int size() const noexcept { return static_cast<int>(map_.size()); }
  Node operator()(Node v) const { return map_[static_cast<std::size_t>(v)]; }
  const std::vector<Node>& map() const noexcept { return map_; }
  bool is_identity() const noexcept;

  Permutation inverse() const;
  /// x -> next(this(x)).
  Permutation then(const Permutation& next) const;

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Node> map_;
};

/// Immutable DAG on nodes 0..n-1. Construction rejects cycles, self-loops,
/// duplicate edges and out-of-range ids.
class Dag {
 public:
  Dag() = default;
  Dag(int n, std::vector<Edge> edges);

  int n() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_edge(Node parent, Node child) const {
    return adj_[static_cast<std::size_t>(parent) * static_cast<std::size_t>(n_) +
                static_cast<std::size_t>(child)] != 0;
  }
  bool adjacent(Node a, Node b) const { return has_edge(a, b) || has_edge(b, a); }

  /// Ascending.
  std::span<const Node> parents(Node v) const { return parents_[static_cast<std::size_t>(v)]; }
  std::span<const Node> children(Node v) const { return children_[static_cast<std::size_t>(v)]; }
  int skeleton_degree(Node v) const {
    return static_cast<int>(parents(v).size() + children(v).size());
  }

  friend bool operator==(const Dag& a, const Dag& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<std::uint8_t> adj_;
};

struct TopoOrder {
  std::vector<Node> order;
  std::vector<int> position;  // position[v] = index of v in order
};

/// Kahn's algorithm, smallest ready id first. Empty if the edges contain a cycle.
std::optional<TopoOrder> try_topo_sort(int n, std::span<const Edge> edges);
TopoOrder topo_sort(const Dag& g);
bool is_topological(const Dag& g, std::span<const Node> order);

NodeSet descendants(const Dag& g, Node i);
/// All j != i with no directed path i -> ... -> j.
NodeSet nondescendants(const Dag& g, Node i);

Dag apply_permutation(const Dag& g, const Permutation& p);

struct Immorality {
  Node i;  // tip, i < j
  Node k;  // collider
  Node j;  // tip
  friend auto operator<=>(const Immorality&, const Immorality&) = default;
};

/// Complete invariant of a Markov equivalence class.
struct Pattern {
  int n = 0;
  std::vector<std::pair<Node, Node>> skeleton;  // (a, b), a < b, sorted
  std::vector<Immorality> immoralities;         // sorted
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

Pattern pattern(const Dag& g);
Pattern relabel(const Pattern& p, const Permutation& perm);

/// Skeleton degree of every node.
std::vector<int> skeleton_degrees(const Pattern& p);

/// First permutation (lexicographic in the image sequence) carrying p1 onto
/// p2, or nullopt. Candidates are pruned by skeleton degree only.
std::optional<Permutation> pattern_isomorphic(const Pattern& p1, const Pattern& p2);

/// Every DAG on n labeled nodes, ordered by edge bitmask. Guarded to n <= 5.
std::vector<Dag> enumerate_all_dags(int n);

/// Uniform random node order, then `edge_count` distinct forward pairs drawn uniformly.
Dag random_dag(int n, std::size_t edge_count, Rng& rng);

}  // namespace dagiso
