#ifndef CACHECODE_LINALG_HPP
#define CACHECODE_LINALG_HPP

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cachecode/errors.hpp"
#include "cachecode/finite_field.hpp"

namespace cachecode {

template <class F>
concept Field = requires(const F& f, const typename F::Element& a, const typename F::Element& b) {
  { f.zero() } -> std::convertible_to<typename F::Element>;
  { f.one() } -> std::convertible_to<typename F::Element>;
  { f.add(a, b) } -> std::convertible_to<typename F::Element>;
  { f.sub(a, b) } -> std::convertible_to<typename F::Element>;
  { f.mul(a, b) } -> std::convertible_to<typename F::Element>;
  { f.inv(a) } -> std::convertible_to<typename F::Element>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
};

/// Dense row-major matrix over a finite field. A value type: algorithms below
/// never mutate their inputs.
template <Field F>
class Matrix {
 public:
  using Element = typename F::Element;

  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  Matrix(F field, std::size_t rows, std::size_t cols, std::vector<Element> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw DimensionMismatch("entry count does not match rows*cols");
  }

  static Matrix identity(F field, std::size_t n) {
    Matrix out(field, n, n);
    for (std::size_t i = 0; i < n; ++i) out.set(i, i, out.field_.one());
    return out;
  }

  const F& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Element& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Element v) { data_[r * cols_ + c] = std::move(v); }

  std::vector<Element> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }
  std::vector<Element> column(std::size_t c) const {
    std::vector<Element> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, c));
    return out;
  }

  Matrix transpose() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, at(r, c));
    return out;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> data_;
};

template <Field F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  const F& f = a.field();
  Matrix<F> out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a.at(i, k);
      if (f.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out.set(i, j, f.add(out.at(i, j), f.mul(aik, b.at(k, j))));
    }
  return out;
}

template <Field F>
std::vector<typename F::Element> multiply(const Matrix<F>& a, std::span<const typename F::Element> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector: width mismatch");
  const F& f = a.field();
  std::vector<typename F::Element> out(a.rows(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!f.is_zero(a.at(i, j))) out[i] = f.add(out[i], f.mul(a.at(i, j), x[j]));
  return out;
}

template <Field F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack: row counts differ");
  Matrix<F> out(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.at(r, c));
    for (std::size_t c = 0; c < b.cols(); ++c) out.set(r, a.cols() + c, b.at(r, c));
  }
  return out;
}

template <Field F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack: column counts differ");
  Matrix<F> out(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.at(r, c));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out.set(a.rows() + r, c, b.at(r, c));
  return out;
}

template <Field F>
Matrix<F> block_diagonal(const F& field, std::span<const Matrix<F>> blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix<F> out(field, rows, cols);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) out.set(r0 + r, c0 + c, b.at(r, c));
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

template <Field F>
Matrix<F> select_rows(const Matrix<F>& a, std::span<const std::size_t> rows) {
  Matrix<F> out(a.field(), rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(i, c, a.at(rows[i], c));
  return out;
}

template <Field F>
Matrix<F> select_columns(const Matrix<F>& a, std::span<const std::size_t> cols) {
  Matrix<F> out(a.field(), a.rows(), cols.size());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out.set(r, j, a.at(r, cols[j]));
  return out;
}

/// Reduced row echelon form plus the pivot column of each nonzero row.
template <Field F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination with first-nonzero pivoting.
template <Field F>
Echelon<F> row_reduce(Matrix<F> a) {
  const F& f = a.field();
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t col = 0; col < a.cols() && prow < a.rows(); ++col) {
    std::size_t sel = prow;
    while (sel < a.rows() && f.is_zero(a.at(sel, col))) ++sel;
    if (sel == a.rows()) continue;
    if (sel != prow)
      for (std::size_t c = 0; c < a.cols(); ++c) {
        auto tmp = a.at(sel, c);
        a.set(sel, c, a.at(prow, c));
        a.set(prow, c, std::move(tmp));
      }
    const auto inv = f.inv(a.at(prow, col));
    for (std::size_t c = col; c < a.cols(); ++c)
      if (!f.is_zero(a.at(prow, c))) a.set(prow, c, f.mul(a.at(prow, c), inv));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == prow || f.is_zero(a.at(r, col))) continue;
      const auto factor = a.at(r, col);
      for (std::size_t c = col; c < a.cols(); ++c)
        if (!f.is_zero(a.at(prow, c))) a.set(r, c, f.sub(a.at(r, c), f.mul(factor, a.at(prow, c))));
    }
    pivots.push_back(col);
    ++prow;
  }
  return {std::move(a), std::move(pivots)};
}

template <Field F>
std::size_t rank(const Matrix<F>& a) {
  return row_reduce(a).pivots.size();
}

namespace detail {

template <Field F>
Matrix<F> augment(const Matrix<F>& a, std::span<const typename F::Element> b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve: right-hand side length differs from row count");
  Matrix<F> aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.set(r, c, a.at(r, c));
    aug.set(r, a.cols(), b[r]);
  }
  return aug;
}

}  // namespace detail

/// Some x with a·x = b (free variables set to zero). Throws Inconsistent.
template <Field F>
std::vector<typename F::Element> solve_any(const Matrix<F>& a, std::span<const typename F::Element> b) {
  auto ech = row_reduce(detail::augment(a, b));
  const F& f = a.field();
  std::vector<typename F::Element> x(a.cols(), f.zero());
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
    if (ech.pivots[i] == a.cols()) throw Inconsistent("linear system has no solution");
    x[ech.pivots[i]] = ech.reduced.at(i, a.cols());
  }
  return x;
}

/// The unique x with a·x = b. Inconsistent if no solution, Singular if not unique.
template <Field F>
std::vector<typename F::Element> solve(const Matrix<F>& a, std::span<const typename F::Element> b) {
  auto ech = row_reduce(detail::augment(a, b));
  const F& f = a.field();
  for (auto p : ech.pivots)
    if (p == a.cols()) throw Inconsistent("linear system has no solution");
  if (ech.pivots.size() < a.cols()) throw Singular("linear system is rank deficient");
  std::vector<typename F::Element> x(a.cols(), f.zero());
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) x[ech.pivots[i]] = ech.reduced.at(i, a.cols());
  return x;
}

template <Field F>
std::vector<typename F::Element> solve(const Matrix<F>& a, const std::vector<typename F::Element>& b) {
  return solve(a, std::span<const typename F::Element>(b));
}

/// True iff v lies in the row space of a.
template <Field F>
bool row_space_contains(const Matrix<F>& a, std::span<const typename F::Element> v) {
  if (v.size() != a.cols()) throw DimensionMismatch("row_space_contains: width mismatch");
  Matrix<F> one_row(a.field(), 1, a.cols(), {v.begin(), v.end()});
  return rank(vstack(a, one_row)) == rank(a);
}

/// Lifts a base-field matrix into an extension field.
inline Matrix<ExtField> embed(const ExtField& ext, const Matrix<PrimeField>& a) {
  Matrix<ExtField> out(ext, a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.at(r, c) != 0) out.set(r, c, ext.embed(a.at(r, c)));
  return out;
}

/// Row vector times base-field matrix: out_j = sum_i x_i * a(i, j), with the
/// GF(q) coefficients acting componentwise on GF(q^m) symbols.
inline std::vector<ExtElement> combine_columns(const ExtField& ext, std::span<const ExtElement> x,
                                               const Matrix<PrimeField>& a) {
  if (x.size() != a.rows()) throw DimensionMismatch("combine_columns: length mismatch");
  std::vector<ExtElement> out(a.cols(), ext.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0) out[j] = ext.add(out[j], ext.scale(x[i], a.at(i, j)));
  return out;
}

}  // namespace cachecode

#endif  // CACHECODE_LINALG_HPP
