#pragma once

// Conditional-independence statements of a DAG and the determinantal
// generators built from them.

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "dagiso/dag.hpp"

namespace dagiso {

/// i is independent of j given cond. Stored as produced; use normalized()
/// before set-level comparisons.
struct CiStatement {
  Node i = 0;
  Node j = 0;
  NodeSet cond;

  CiStatement normalized() const;
  friend auto operator<=>(const CiStatement&, const CiStatement&) = default;
};

/// Rows (i, K ascending) by columns (j, K ascending) of the covariance matrix.
struct MinorSpec {
  std::vector<Node> rows;
  std::vector<Node> cols;
  friend auto operator<=>(const MinorSpec&, const MinorSpec&) = default;
};

MinorSpec minor_of(const CiStatement& s);

/// Linear: sigma_ij = 0. Quadratic: sigma_ij - sigma_ik * sigma_kj = 0.
struct TreeRelation {
  enum class Kind { kLinear, kQuadratic };
  Kind kind = Kind::kLinear;
  Node i = 0;
  Node j = 0;
  std::optional<Node> k;
  friend bool operator==(const TreeRelation&, const TreeRelation&) = default;
};

/// Largest n accepted by routines that enumerate every conditioning set.
inline constexpr int kMaxEnumerationNodes = 12;

/// Throws InputError if i == j, either is in cond, or any id is out of range.
bool d_separated(const Dag& g, Node i, Node j, std::span<const Node> cond);

/// For each node i in topological order with K = pa(i), one statement
/// (i, j, K) per earlier j not in K, j in increasing topological position.
std::vector<CiStatement> toposorted_imposed(const Dag& g);

/// Every d-separation i _||_ j | K with i < j, ordered by (i, j, |K|, K).
std::vector<CiStatement> implied_relations(const Dag& g);

std::vector<MinorSpec> imposed_minors(const Dag& g);

bool is_forest(const Dag& g);

/// Lower-degree generators for forests. Throws InputError for non-forests.
std::vector<TreeRelation> tree_reduced_generators(const Dag& t);

/// Implied relations whose indices avoid `removed` entirely.
std::vector<CiStatement> marginal_implied(const Dag& g, std::span<const Node> removed);

/// Whether every toposorted imposed statement of m, carried through `embed`
/// (m-node -> g-node), is a d-separation in g.
bool lies_below_ci(const Dag& m, const Dag& g, std::span<const Node> embed);

}  // namespace dagiso
