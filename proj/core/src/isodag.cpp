#include "dagiso/isodag.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "dagiso/ci.hpp"
#include "dagiso/errors.hpp"

namespace dagiso {

std::uint64_t degree_bound_surrogate(const Dag& g, const Dag& g2) {
  return g.edge_count() + g2.edge_count() + 2 * static_cast<std::uint64_t>(std::max(g.n(), g2.n()));
}

namespace {

mpq_class round_base(int n, std::uint64_t d, std::uint64_t q, bool with_permutations) {
  if (n < 0) throw ParameterError("negative node count");
  if (q <= d) throw ParameterError("modulus q = " + std::to_string(q) + " must exceed d_bound = " + std::to_string(d));
  mpz_class numer = mpz_class(static_cast<unsigned long>(n)) + 2 * mpz_class(static_cast<unsigned long>(d)) - 1;
  if (with_permutations) {
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
    numer *= fact;
  }
  mpq_class base(numer, mpz_class(static_cast<unsigned long>(q - d)));
  base.canonicalize();
  return base;
}

mpq_class power(const mpq_class& base, int m) {
  mpq_class out(1);
  for (int k = 0; k < m; ++k) out *= base;
  return out;
}

void validate(const IsoParams& p) {
  if (p.m < 1) throw ParameterError("number of rounds m must be at least 1");
  if (p.q <= p.d_bound) throw ParameterError("modulus q must exceed d_bound");
  (void)PrimeField(p.q);
}

}  // namespace

FailureBound failure_bound(int n, std::uint64_t d_bound, std::uint64_t q, int m, bool with_permutations) {
  if (m < 1) throw ParameterError("number of rounds m must be at least 1");
  FailureBound b;
  b.value = power(round_base(n, d_bound, q, with_permutations), m);
  b.vacuous = b.value >= 1;
  return b;
}

int rounds_for_epsilon(int n, std::uint64_t d_bound, std::uint64_t q, const mpq_class& target_eps,
                       bool with_permutations) {
  if (target_eps <= 0 || target_eps > 1) throw ParameterError("target epsilon must lie in (0, 1]");
  if (target_eps == 1) return 1;
  const mpq_class base = round_base(n, d_bound, q, with_permutations);
  if (base >= 1)
    throw ParameterError("per-round bound is vacuous for n = " + std::to_string(n) + " at q = " + std::to_string(q) +
                         "; a larger modulus is required");
  constexpr int kMaxRounds = 100000;
  int m = 1;
  mpq_class bound = base;
  while (bound > target_eps) {
    if (++m > kMaxRounds) throw ParameterError("target epsilon needs too many rounds; use a larger modulus");
    bound *= base;
  }
  return m;
}

IsoParams choose_params(int n, std::size_t edges, const mpq_class& target_eps, bool with_permutations,
                        std::uint64_t seed) {
  IsoParams p;
  p.q = kMersenne31;
  p.d_bound = 2 * static_cast<std::uint64_t>(edges) + 2 * static_cast<std::uint64_t>(n);
  p.seed = seed;
  p.m = rounds_for_epsilon(n, p.d_bound, p.q, target_eps, with_permutations);
  return p;
}

IsoParams make_params(const Dag& g, const Dag& g2, int m, std::uint64_t q, std::uint64_t seed) {
  IsoParams p;
  p.m = m;
  p.q = q;
  p.seed = seed;
  p.d_bound = degree_bound_surrogate(g, g2);
  return p;
}

namespace {

std::optional<Permutation> search_relabeling(const FpPoint& z, const Dag& target,
                                             const std::vector<int>* source_degree) {
  const int n = target.n();
  if (z.n() != n) throw InputError("point and target sizes differ");
  if (n > kMaxIsoNodes) throw SizeGuardError("relabeling search supports n <= " + std::to_string(kMaxIsoNodes));
  const auto un = static_cast<std::size_t>(n);

  const std::vector<MinorSpec> minors = imposed_minors(target);
  std::vector<std::uint32_t> support(minors.size(), 0);
  std::vector<std::vector<std::size_t>> touching(un);
  for (std::size_t k = 0; k < minors.size(); ++k) {
    for (Node v : minors[k].rows) support[k] |= 1U << v;
    for (Node v : minors[k].cols) support[k] |= 1U << v;
    for (Node v = 0; v < n; ++v)
      if (support[k] >> v & 1U) touching[static_cast<std::size_t>(v)].push_back(k);
  }
  std::vector<int> target_degree(un);
  for (Node v = 0; v < n; ++v) target_degree[static_cast<std::size_t>(v)] = target.skeleton_degree(v);

  std::vector<Node> image(un, -1), preimage(un, -1);
  std::uint32_t assigned = 0;
  bool found = false;

  // A minor is evaluated once, when the last of its target indices is assigned.
  std::function<void(Node)> extend = [&](Node v) {
    if (v == n) {
      found = true;
      return;
    }
    for (Node t = 0; t < n && !found; ++t) {
      if (assigned >> t & 1U) continue;
      if (source_degree && (*source_degree)[static_cast<std::size_t>(v)] != target_degree[static_cast<std::size_t>(t)])
        continue;
      image[static_cast<std::size_t>(v)] = t;
      preimage[static_cast<std::size_t>(t)] = v;
      assigned |= 1U << t;
      bool ok = true;
      for (std::size_t k : touching[static_cast<std::size_t>(t)]) {
        if ((support[k] & ~assigned) != 0) continue;
        if (!z.field.is_zero(minor_eval_relabeled(z, minors[k], preimage))) {
          ok = false;
          break;
        }
      }
      if (ok) extend(v + 1);
      if (found) return;
      assigned &= ~(1U << t);
      preimage[static_cast<std::size_t>(t)] = -1;
    }
  };
  extend(0);
  if (!found) return std::nullopt;
  return Permutation(image);
}

IsoVerdict refuted_by_precheck(const IsoParams& params, bool with_permutations, std::string reason) {
  IsoVerdict v;
  v.answer = false;
  v.rounds_run = 0;
  v.refuting_round = 0;
  v.reason = std::move(reason);
  v.with_permutations = with_permutations;
  v.params = params;
  return v;
}

template <class RoundCheck>
IsoVerdict run_rounds(const Dag& g, const Dag& g2, const IsoParams& params, bool with_permutations,
                      RoundCheck&& check) {
  validate(params);
  if (g.n() != g2.n()) return refuted_by_precheck(params, with_permutations, "node counts differ");
  if (g.edge_count() != g2.edge_count())
    return refuted_by_precheck(params, with_permutations, "edge counts differ, so variety dimensions differ");

  const PrimeField field(params.q);
  IsoVerdict v;
  v.with_permutations = with_permutations;
  v.params = params;
  v.bound = failure_bound(g.n(), params.d_bound, params.q, params.m, with_permutations);
  for (int r = 1; r <= params.m; ++r) {
    const FpPoint z1 = sample_point(g, field, derive_seed(params.seed, 2 * static_cast<std::uint64_t>(r)));
    const FpPoint z2 = sample_point(g2, field, derive_seed(params.seed, 2 * static_cast<std::uint64_t>(r) + 1));
    v.rounds_run = r;
    std::string failure;
    auto witness = check(z1, z2, failure);
    if (!witness) {
      v.answer = false;
      v.refuting_round = r;
      v.reason = std::move(failure);
      v.witnesses.clear();
      return v;
    }
    v.witnesses.push_back(std::move(*witness));
  }
  v.answer = true;
  v.reason = "all rounds passed";
  return v;
}

}  // namespace

std::optional<Permutation> perm_witness(const FpPoint& z, const Dag& target) {
  return search_relabeling(z, target, nullptr);
}

std::optional<Permutation> perm_witness(const FpPoint& z, const Dag& source, const Dag& target) {
  if (source.n() != target.n()) throw InputError("source and target sizes differ");
  std::vector<int> degree(static_cast<std::size_t>(source.n()));
  for (Node v = 0; v < source.n(); ++v) degree[static_cast<std::size_t>(v)] = source.skeleton_degree(v);
  return search_relabeling(z, target, &degree);
}

IsoVerdict isodag_test(const Dag& g, const Dag& g2, const IsoParams& params) {
  if (std::max(g.n(), g2.n()) > kMaxIsoNodes)
    throw SizeGuardError("isomorphism test supports n <= " + std::to_string(kMaxIsoNodes));
  return run_rounds(g, g2, params, true,
                    [&](const FpPoint& z1, const FpPoint& z2, std::string& failure) -> std::optional<RoundWitness> {
                      auto fwd = perm_witness(z1, g, g2);
                      if (!fwd) {
                        failure = "no relabeling carries the first model's point onto the second variety";
                        return std::nullopt;
                      }
                      auto bwd = perm_witness(z2, g2, g);
                      if (!bwd) {
                        failure = "no relabeling carries the second model's point onto the first variety";
                        return std::nullopt;
                      }
                      return RoundWitness{std::move(*fwd), std::move(*bwd)};
                    });
}

IsoVerdict equiv_randomized(const Dag& g, const Dag& g2, const IsoParams& params) {
  return run_rounds(g, g2, params, false,
                    [&](const FpPoint& z1, const FpPoint& z2, std::string& failure) -> std::optional<RoundWitness> {
                      if (!on_variety(z1, g2)) {
                        failure = "first model's point is off the second variety";
                        return std::nullopt;
                      }
                      if (!on_variety(z2, g)) {
                        failure = "second model's point is off the first variety";
                        return std::nullopt;
                      }
                      const auto id = Permutation::identity(g.n());
                      return RoundWitness{id, id};
                    });
}

}  // namespace dagiso
