#pragma once

// Exact scalar fields and dense linear algebra over them.
//
// A field is a small context object that owns the arithmetic; elements are
// plain values. Two instantiations exist: PrimeField (F_q, q < 2^32) and
// RationalField (GMP rationals). All elimination routines are templated on
// the field so the same code path serves the sampler (F_q) and the rational
// covariance checks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dagiso/errors.hpp"

namespace dagiso {

/// 2^31 - 1.
inline constexpr std::uint64_t kMersenne31 = 2147483647ULL;

class PrimeField {
 public:
  using Element = std::uint64_t;

  /// Throws ParameterError unless q is an odd prime below 2^32.
  explicit PrimeField(std::uint64_t q = kMersenne31);

  std::uint64_t modulus() const noexcept { return q_; }

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  Element from_int(std::int64_t v) const noexcept {
    auto r = v % static_cast<std::int64_t>(q_);
    return static_cast<Element>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }
  bool is_zero(Element a) const noexcept { return a == 0; }

  Element add(Element a, Element b) const noexcept {
    Element s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Element mul(Element a, Element b) const noexcept { return (a * b) % q_; }
  /// Throws SingularPivotError on zero.
  Element inv(Element a) const;

  std::string to_string(Element a) const { return std::to_string(a); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t q_;
};

class RationalField {
 public:
  using Element = mpq_class;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element from_int(std::int64_t v) const { return Element(static_cast<long>(v)); }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const;

  std::string to_string(const Element& a) const { return a.get_str(); }

  friend bool operator==(const RationalField&, const RationalField&) = default;
};

bool is_prime(std::uint64_t q) noexcept;

/// Parses "p", "-p", "p/q" or a decimal such as "1e-9" / "0.25" into an exact rational.
mpq_class parse_rational(const std::string& text);

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transposed() const {
    Matrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.data_.reserve(data_.size());
    for (std::size_t c = 0; c < cols_; ++c)
      for (std::size_t r = 0; r < rows_; ++r) t.data_.push_back((*this)(r, c));
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class F>
using FieldMatrix = Matrix<typename F::Element>;

template <class F>
FieldMatrix<F> identity_matrix(const F& field, std::size_t n) {
  FieldMatrix<F> m(n, n, field.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

template <class F>
FieldMatrix<F> matrix_from_ints(const F& field,
                                const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  FieldMatrix<F> m(rows.size(), c, field.zero());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c) throw InputError("matrix rows have unequal length");
    for (std::size_t k = 0; k < c; ++k) m(r, k) = field.from_int(rows[r][k]);
  }
  return m;
}

template <class T, class Index>
Matrix<T> submatrix(const Matrix<T>& m, std::span<const Index> rows, std::span<const Index> cols) {
  Matrix<T> s(rows.size(), cols.size(), T{});
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      s(r, c) = m(static_cast<std::size_t>(rows[r]), static_cast<std::size_t>(cols[c]));
  return s;
}

template <class F>
FieldMatrix<F> multiply(const F& field, const FieldMatrix<F>& a, const FieldMatrix<F>& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  FieldMatrix<F> p(a.rows(), b.cols(), field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (field.is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        p(i, j) = field.add(p(i, j), field.mul(a(i, k), b(k, j)));
    }
  return p;
}

template <class E>
struct DetRank {
  std::optional<E> det;  // empty for non-square input
  std::size_t rank = 0;
};

/// Row reduction taking the first nonzero entry in each column as pivot.
/// The determinant of a 0x0 matrix is one.
template <class F>
DetRank<typename F::Element> det_and_rank(const F& field, FieldMatrix<F> m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t rank = 0;
  bool negate = false;
  auto det = field.one();
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && field.is_zero(m(pivot, c))) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t k = c; k < cols; ++k) std::swap(m(pivot, k), m(rank, k));
      negate = !negate;
    }
    det = field.mul(det, m(rank, c));
    const auto pivot_inv = field.inv(m(rank, c));
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (field.is_zero(m(r, c))) continue;
      const auto factor = field.mul(m(r, c), pivot_inv);
      for (std::size_t k = c; k < cols; ++k)
        m(r, k) = field.sub(m(r, k), field.mul(factor, m(rank, k)));
    }
    ++rank;
  }
  DetRank<typename F::Element> out;
  out.rank = rank;
  if (rows == cols) out.det = rank == rows ? (negate ? field.neg(det) : det) : field.zero();
  return out;
}

template <class F>
typename F::Element determinant(const F& field, const FieldMatrix<F>& m) {
  if (!m.square()) throw InputError("determinant of a non-square matrix");
  return *det_and_rank(field, m).det;
}

template <class F>
std::size_t matrix_rank(const F& field, const FieldMatrix<F>& m) {
  return det_and_rank(field, m).rank;
}

/// Root of a*x - b = 0. Throws SingularPivotError when a is zero.
template <class F>
typename F::Element solve_univariate_linear(const F& field, const typename F::Element& a,
                                            const typename F::Element& b) {
  if (field.is_zero(a)) throw SingularPivotError("zero leading coefficient in linear solve");
  return field.mul(b, field.inv(a));
}

}  // namespace dagiso
