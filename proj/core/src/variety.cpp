#include "dagiso/variety.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace dagiso {

RationalPoint sem_covariance(const SemParams& params) {
  const Dag& g = params.g;
  const auto n = static_cast<std::size_t>(g.n());
  if (params.alpha.size() != g.edge_count()) throw InputError("alpha must have one entry per edge");
  if (params.omega.size() != n) throw InputError("omega must have one entry per node");
  for (const auto& w : params.omega)
    if (sgn(w) == 0) throw InputError("omega entries must be nonzero");

  // coef(child, parent) = alpha on that edge.
  Matrix<mpq_class> coef(n, n, mpq_class(0));
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    coef(static_cast<std::size_t>(g.edges()[e].child), static_cast<std::size_t>(g.edges()[e].parent)) =
        params.alpha[e];

  Matrix<mpq_class> sigma(n, n, mpq_class(0));
  const TopoOrder topo = topo_sort(g);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto i = static_cast<std::size_t>(topo.order[pos]);
    for (std::size_t prev = 0; prev < pos; ++prev) {
      const auto j = static_cast<std::size_t>(topo.order[prev]);
      mpq_class acc = 0;
      for (Node p : g.parents(static_cast<Node>(i))) acc += coef(i, static_cast<std::size_t>(p)) * sigma(static_cast<std::size_t>(p), j);
      sigma(i, j) = acc;
      sigma(j, i) = acc;
    }
    mpq_class var = params.omega[i] * params.omega[i];
    for (Node p : g.parents(static_cast<Node>(i))) var += coef(i, static_cast<std::size_t>(p)) * sigma(static_cast<std::size_t>(p), i);
    sigma(i, i) = var;
  }
  return RationalPoint{RationalField{}, std::move(sigma)};
}

SemParams random_sem_params(const Dag& g, Rng& rng, int magnitude) {
  std::uniform_int_distribution<int> draw(-magnitude, magnitude - 1);
  auto nonzero = [&] {
    const int v = draw(rng);
    return mpq_class(v >= 0 ? v + 1 : v);
  };
  SemParams p{g, {}, {}};
  for (std::size_t e = 0; e < g.edge_count(); ++e) p.alpha.push_back(nonzero());
  for (int v = 0; v < g.n(); ++v) p.omega.push_back(nonzero());
  return p;
}

FpPoint complete_point(const Dag& g, const PrimeField& field,
                       std::span<const PrimeField::Element> edge_values) {
  const auto n = static_cast<std::size_t>(g.n());
  if (edge_values.size() != g.edge_count()) throw InputError("need one value per edge");
  FieldMatrix<PrimeField> sigma = identity_matrix(field, n);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto a = static_cast<std::size_t>(g.edges()[e].parent);
    const auto b = static_cast<std::size_t>(g.edges()[e].child);
    sigma(a, b) = sigma(b, a) = edge_values[e] % field.modulus();
  }

  const TopoOrder topo = topo_sort(g);
  std::vector<Node> rows, cols;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const Node i = topo.order[pos];
    const auto pa = g.parents(i);
    // |sigma_{iK,jK}| = |sigma_{iK,jK}|_{sigma_ij = 0} + sigma_ij * |sigma_KK|.
    const auto pivot = determinant(field, submatrix<PrimeField::Element, Node>(sigma, pa, pa));
    if (field.is_zero(pivot))
      throw SingularPivotError("parent-set minor of node " + std::to_string(i) + " vanishes");
    rows.assign(1, i);
    rows.insert(rows.end(), pa.begin(), pa.end());
    for (std::size_t prev = 0; prev < pos; ++prev) {
      const Node j = topo.order[prev];
      if (std::binary_search(pa.begin(), pa.end(), j)) continue;
      cols.assign(1, j);
      cols.insert(cols.end(), pa.begin(), pa.end());
      auto m = submatrix<PrimeField::Element, Node>(sigma, rows, cols);
      m(0, 0) = field.zero();
      const auto rest = determinant(field, m);
      const auto value = solve_univariate_linear(field, pivot, field.neg(rest));
      sigma(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = value;
      sigma(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = value;
    }
  }
  return FpPoint{field, std::move(sigma)};
}

namespace {

MinorCheck resolve(MinorCheck check, int n) {
  if (check != MinorCheck::kAuto) return check;
  return n <= kMaxAllMinorsNodes ? MinorCheck::kAll : MinorCheck::kFamilies;
}

bool principal_nonzero(const FpPoint& p, std::span<const Node> set) {
  return !p.field.is_zero(determinant(p.field, submatrix<PrimeField::Element, Node>(p.mat, set, set)));
}

}  // namespace

NodeSet first_vanishing_principal_minor(const FpPoint& p) {
  const int n = p.n();
  if (n > kMaxAllMinorsNodes) throw SizeGuardError("exhaustive principal-minor check supports n <= 14");
  NodeSet set;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    set.clear();
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1U) set.push_back(v);
    if (!principal_nonzero(p, set)) return set;
  }
  return {};
}

bool principal_minors_nonzero(const FpPoint& p, const Dag& g, MinorCheck check) {
  if (p.n() != g.n()) throw InputError("point and graph sizes differ");
  if (resolve(check, g.n()) == MinorCheck::kAll) return first_vanishing_principal_minor(p).empty();
  NodeSet family;
  for (Node i = 0; i < g.n(); ++i) {
    const auto pa = g.parents(i);
    if (!principal_nonzero(p, pa)) return false;
    family.assign(pa.begin(), pa.end());
    family.insert(std::lower_bound(family.begin(), family.end(), i), i);
    if (!principal_nonzero(p, family)) return false;
  }
  return true;
}

FpPoint sample_point(const Dag& g, const PrimeField& field, std::uint64_t seed,
                     const SamplerOptions& options) {
  const MinorCheck check = resolve(options.check, g.n());
  if (check == MinorCheck::kAll && g.n() > kMaxAllMinorsNodes)
    throw SizeGuardError("exhaustive principal-minor check supports n <= 14");
  Rng rng(seed);
  std::uniform_int_distribution<std::uint64_t> draw(0, field.modulus() - 1);
  std::vector<PrimeField::Element> edge_values(g.edge_count());
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    for (auto& v : edge_values) v = draw(rng);
    try {
      FpPoint p = complete_point(g, field, edge_values);
      if (principal_minors_nonzero(p, g, check)) return p;
    } catch (const SingularPivotError&) {
      // rejected; draw again
    }
  }
  throw ResampleFailure("no admissible point after " + std::to_string(options.max_attempts) +
                        " draws over F_" + std::to_string(field.modulus()) +
                        "; use a larger modulus");
}

}  // namespace dagiso
