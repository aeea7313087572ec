#pragma once

// Enumeration of directed tree models and their partition into
// isomorphism classes.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dagiso/dag.hpp"
#include "dagiso/isodag.hpp"

namespace dagiso {

inline constexpr int kMaxTreeNodes = 8;
inline constexpr int kMaxCanonicalNodes = 10;

/// n^(n-2) * 2^(n-1) for n >= 2, 1 for n = 1.
std::uint64_t tree_dag_count(int n);

/// Labeled trees in Pruefer-sequence order, each with all 2^(n-1)
/// orientations (bit e of the mask reverses the e-th sorted tree edge).
void for_each_tree_dag(int n, const std::function<void(const Dag&)>& visit);

/// Tree with the given Pruefer sequence, as sorted undirected pairs (a < b).
std::vector<std::pair<Node, Node>> pruefer_decode(int n, std::span<const Node> sequence);

/// Equal strings exactly when the patterns are isomorphic.
std::string canonical_pattern(const Pattern& p);
std::string canonical_pattern(const Dag& g);

enum class ClassifyMode { kOracle, kRandomized, kCrossCheck };

struct ClassReport {
  int n = 0;
  ClassifyMode mode = ClassifyMode::kOracle;
  std::size_t class_count = 0;
  std::vector<Dag> representatives;        // lexicographically least edge list per class
  std::vector<std::uint64_t> class_sizes;  // labeled members per class
  std::uint64_t total = 0;
  std::uint64_t isodag_calls = 0;          // randomized merges performed
};

struct ClassifyOptions {
  int m = 3;
  std::uint64_t q = kMersenne31;
  std::uint64_t seed = kDefaultSeed;
};

/// Classes are listed in order of their representatives' edge lists.
ClassReport classify_trees(int n, ClassifyMode mode, const ClassifyOptions& options = {});

}  // namespace dagiso
