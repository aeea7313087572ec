#pragma once

// Randomized isomorphism and Markov-equivalence tests for DAG models.
//
// Each round draws one point from each model's variety over F_q and asks
// whether some relabeling (isomorphism) or the identity (equivalence)
// carries it onto the other model's variety. Isomorphic inputs always pass;
// non-isomorphic inputs pass a round with probability at most the
// failure_bound() base.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dagiso/dag.hpp"
#include "dagiso/field.hpp"
#include "dagiso/rng.hpp"
#include "dagiso/variety.hpp"

namespace dagiso {

/// perm_witness / isodag_test search n! relabelings.
inline constexpr int kMaxIsoNodes = 10;

struct IsoParams {
  int m = 3;
  std::uint64_t q = kMersenne31;
  std::uint64_t d_bound = 0;  // surrogate for the degree of the sampler's exceptional locus
  std::uint64_t seed = kDefaultSeed;
};

struct FailureBound {
  mpq_class value;
  bool vacuous = false;  // value >= 1
};

struct RoundWitness {
  Permutation forward;   // carries the first model's point onto the second variety
  Permutation backward;  // carries the second model's point onto the first variety
};

struct IsoVerdict {
  bool answer = false;
  int rounds_run = 0;
  std::vector<RoundWitness> witnesses;  // one per round when answer is yes
  std::optional<int> refuting_round;    // 1-based; 0 means refuted by a size precheck
  std::string reason;
  bool with_permutations = true;
  IsoParams params;
  FailureBound bound;
};

/// sum |pa_G(i)| + sum |pa_G'(i)| + 2n.
std::uint64_t degree_bound_surrogate(const Dag& g, const Dag& g2);

/// (n! (n + 2d - 1) / (q - d))^m, without the n! factor when
/// with_permutations is false. Throws ParameterError if q <= d.
FailureBound failure_bound(int n, std::uint64_t d_bound, std::uint64_t q, int m, bool with_permutations);

/// Smallest m with failure_bound(...) <= target_eps. ParameterError when
/// target_eps is outside (0, 1] or the per-round base is vacuous.
int rounds_for_epsilon(int n, std::uint64_t d_bound, std::uint64_t q, const mpq_class& target_eps,
                       bool with_permutations);

/// q = 2^31 - 1, d from the surrogate with both graphs having `edges`
/// edges, and the smallest m meeting `target_eps`.
IsoParams choose_params(int n, std::size_t edges, const mpq_class& target_eps,
                        bool with_permutations = true, std::uint64_t seed = kDefaultSeed);

/// Params for a specific pair with d_bound filled in.
IsoParams make_params(const Dag& g, const Dag& g2, int m, std::uint64_t q = kMersenne31,
                      std::uint64_t seed = kDefaultSeed);

/// First relabeling pi (lexicographic in pi(0), pi(1), ...) with pi(z) on
/// target's variety. Unpruned search over all n! candidates.
std::optional<Permutation> perm_witness(const FpPoint& z, const Dag& target);

/// As above, restricted to pi preserving skeleton degree from `source`
/// (the graph z was drawn from) to `target`.
std::optional<Permutation> perm_witness(const FpPoint& z, const Dag& source, const Dag& target);

IsoVerdict isodag_test(const Dag& g, const Dag& g2, const IsoParams& params);

/// Identity relabeling only; no factorial search, so no node-count guard.
IsoVerdict equiv_randomized(const Dag& g, const Dag& g2, const IsoParams& params);

}  // namespace dagiso
