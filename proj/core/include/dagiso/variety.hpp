#pragma once

// Points of DAG varieties: covariance matrices from linear structural
// equations, the finite-field sampler, minor evaluation and membership.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dagiso/ci.hpp"
#include "dagiso/dag.hpp"
#include "dagiso/errors.hpp"
#include "dagiso/field.hpp"

namespace dagiso {

/// Symmetric n x n matrix over a field. Points produced by the sampler have
/// a unit diagonal; covariances from sem_covariance keep their raw diagonal.
template <class F>
struct SymPoint {
  F field;
  FieldMatrix<F> mat;

  int n() const noexcept { return static_cast<int>(mat.rows()); }
  const typename F::Element& at(Node a, Node b) const {
    return mat(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  bool has_unit_diagonal() const {
    for (std::size_t v = 0; v < mat.rows(); ++v)
      if (mat(v, v) != field.one()) return false;
    return true;
  }
};

template <class F>
SymPoint<F> make_sym_point(const F& field, FieldMatrix<F> mat) {
  if (!mat.square()) throw InputError("point matrix must be square");
  for (std::size_t r = 0; r < mat.rows(); ++r)
    for (std::size_t c = r + 1; c < mat.cols(); ++c)
      if (mat(r, c) != mat(c, r)) throw InputError("point matrix must be symmetric");
  return SymPoint<F>{field, std::move(mat)};
}

using FpPoint = SymPoint<PrimeField>;
using RationalPoint = SymPoint<RationalField>;

/// Determinant of the submatrix picked out by `m`.
template <class F>
typename F::Element minor_eval(const SymPoint<F>& p, const MinorSpec& m) {
  if (m.rows.size() != m.cols.size()) throw InputError("minor must be square");
  for (Node v : m.rows)
    if (v < 0 || v >= p.n()) throw InputError("minor row index out of range");
  for (Node v : m.cols)
    if (v < 0 || v >= p.n()) throw InputError("minor column index out of range");
  return determinant(p.field, submatrix<typename F::Element, Node>(p.mat, m.rows, m.cols));
}

/// Same as minor_eval on the relabeled point pi(p), where `preimage` is
/// pi^-1: entry (a, b) of pi(p) is p(preimage[a], preimage[b]).
template <class F>
typename F::Element minor_eval_relabeled(const SymPoint<F>& p, const MinorSpec& m,
                                         std::span<const Node> preimage) {
  const std::size_t k = m.rows.size();
  FieldMatrix<F> s(k, k, p.field.zero());
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      s(r, c) = p.at(preimage[static_cast<std::size_t>(m.rows[r])],
                     preimage[static_cast<std::size_t>(m.cols[c])]);
  return determinant(p.field, s);
}

/// Every imposed minor of g vanishes at p. Vanishing of a minor is
/// unchanged by rescaling any variable, so raw (non-unit-diagonal)
/// covariances are tested directly.
template <class F>
bool on_variety(const SymPoint<F>& p, const Dag& g) {
  if (p.n() != g.n()) throw InputError("point and graph sizes differ");
  for (const MinorSpec& m : imposed_minors(g))
    if (!p.field.is_zero(minor_eval(p, m))) return false;
  return true;
}

/// pi(p): entry (pi(a), pi(b)) of the result equals entry (a, b) of p.
template <class F>
SymPoint<F> relabel_point(const SymPoint<F>& p, const Permutation& pi) {
  if (pi.size() != p.n()) throw InputError("permutation size does not match point");
  FieldMatrix<F> out(p.mat.rows(), p.mat.cols(), p.field.zero());
  for (Node a = 0; a < p.n(); ++a)
    for (Node b = 0; b < p.n(); ++b)
      out(static_cast<std::size_t>(pi(a)), static_cast<std::size_t>(pi(b))) = p.at(a, b);
  return SymPoint<F>{p.field, std::move(out)};
}

struct CiRanks {
  std::size_t joint = 0;        // rank of sigma[A u C, B u C]
  std::size_t conditioning = 0; // rank of sigma[C, C]
  bool independent() const noexcept { return joint == conditioning; }
};

/// Rank test for A _||_ B | C, valid for singular covariances too.
template <class F>
CiRanks gaussian_ci_ranks(const F& field, const FieldMatrix<F>& sigma, std::span<const Node> a,
                          std::span<const Node> b, std::span<const Node> c) {
  const int n = static_cast<int>(sigma.rows());
  if (!sigma.square()) throw InputError("covariance must be square");
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  auto claim = [&](std::span<const Node> set, int tag) {
    for (Node v : set) {
      if (v < 0 || v >= n) throw InputError("CI index out of range");
      if (owner[static_cast<std::size_t>(v)] != -1) throw InputError("CI index sets must be pairwise disjoint");
      owner[static_cast<std::size_t>(v)] = tag;
    }
  };
  claim(a, 0);
  claim(b, 1);
  claim(c, 2);
  std::vector<Node> rows(a.begin(), a.end()), cols(b.begin(), b.end());
  rows.insert(rows.end(), c.begin(), c.end());
  cols.insert(cols.end(), c.begin(), c.end());
  CiRanks r;
  r.joint = matrix_rank(field, submatrix<typename F::Element, Node>(sigma, rows, cols));
  r.conditioning = matrix_rank(field, submatrix<typename F::Element, Node>(sigma, c, c));
  return r;
}

template <class F>
bool gaussian_ci(const F& field, const FieldMatrix<F>& sigma, std::span<const Node> a,
                 std::span<const Node> b, std::span<const Node> c) {
  return gaussian_ci_ranks(field, sigma, a, b, c).independent();
}

/// X_i = sum_{p in pa(i)} alpha_{p->i} X_p + omega_i Z_i.
struct SemParams {
  Dag g;
  std::vector<mpq_class> alpha;  // aligned with g.edges()
  std::vector<mpq_class> omega;  // one nonzero entry per node
};

/// Raw covariance (I - A)^-1 Omega^2 (I - A)^-T, exact.
RationalPoint sem_covariance(const SemParams& params);

/// Nonzero small-integer coefficients, for tests and the CLI.
SemParams random_sem_params(const Dag& g, Rng& rng, int magnitude = 5);

enum class MinorCheck {
  kAuto,      // kAll when n <= kMaxAllMinorsNodes, else kFamilies
  kAll,       // all 2^n - 1 principal minors
  kFamilies,  // |sigma_{pa(i)}| and |sigma_{i u pa(i)}| for every i
};

inline constexpr int kMaxAllMinorsNodes = 14;

struct SamplerOptions {
  int max_attempts = 64;
  MinorCheck check = MinorCheck::kAuto;
};

/// Solves the toposorted imposed relations for the non-edge entries given
/// the edge entries (aligned with g.edges()). Throws SingularPivotError if
/// some |sigma_{pa(i)}| vanishes.
FpPoint complete_point(const Dag& g, const PrimeField& field,
                       std::span<const PrimeField::Element> edge_values);

/// Principal minors selected by `check` are all nonzero.
bool principal_minors_nonzero(const FpPoint& p, const Dag& g, MinorCheck check = MinorCheck::kAuto);

/// First vanishing principal minor under kAll, as a node set; empty if none.
NodeSet first_vanishing_principal_minor(const FpPoint& p);

/// Random unit-diagonal point of g's variety over F_q. Deterministic in
/// `seed`; throws ResampleFailure when the rejection budget runs out.
FpPoint sample_point(const Dag& g, const PrimeField& field, std::uint64_t seed,
                     const SamplerOptions& options = {});

}  // namespace dagiso
