#pragma once

// Exact dense linear algebra over an exact field T (Gauss-Jordan, no pivot
// tolerances). All routines are templated on the scalar; the library
// instantiates them with fanih::Scalar.

#include <Eigen/Core>

#include <cassert>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fanih {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

/// Zero test that avoids building a T(0) when the scalar can answer directly.
template <class T>
bool entry_is_zero(const T& x) {
  if constexpr (requires { x.is_zero(); }) {
    return x.is_zero();
  } else {
    return x == T(0);
  }
}

/// acc += a * b through a caller-owned temporary.
template <class T>
void add_product(T& acc, const T& a, const T& b, T& tmp) {
  tmp = a;
  tmp *= b;
  acc += tmp;
}

template <class T>
void sub_product(T& acc, const T& a, const T& b, T& tmp) {
  tmp = a;
  tmp *= b;
  acc -= tmp;
}

template <class T>
struct RowEchelon {
  Mat<T> reduced;              // reduced row echelon form (same shape as input)
  std::vector<Index> pivots;   // pivot column of row i, i < rank
  Index rank() const { return static_cast<Index>(pivots.size()); }
};

/// Reduced row echelon form by Gauss-Jordan elimination.
template <class T>
RowEchelon<T> rref(Mat<T> m) {
  RowEchelon<T> out;
  const Index rows = m.rows();
  const Index cols = m.cols();
  Index r = 0;
  std::vector<Index> nz;
  T tmp;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    while (p < rows && entry_is_zero(m(p, c))) ++p;
    if (p == rows) continue;
    if (p != r) m.row(p).swap(m.row(r));
    const T inv = T(1) / m(r, c);
    nz.clear();
    for (Index j = c; j < cols; ++j) {
      if (!entry_is_zero(m(r, j))) {
        m(r, j) *= inv;
        nz.push_back(j);
      }
    }
    for (Index i = 0; i < rows; ++i) {
      if (i == r || entry_is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (Index j : nz) sub_product(m(i, j), f, m(r, j), tmp);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

template <class T>
Index rank(const Mat<T>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return rref<T>(m).rank();
}

/// Basis of the null space as columns; free variables get unit entries.
template <class T>
Mat<T> kernel(const Mat<T>& m) {
  const Index cols = m.cols();
  if (m.rows() == 0) return Mat<T>::Identity(cols, cols);
  const RowEchelon<T> e = rref<T>(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (Index p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  Mat<T> k = Mat<T>::Zero(cols, cols - e.rank());
  Index col = 0;
  for (Index f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    k(f, col) = T(1);
    for (Index i = 0; i < e.rank(); ++i) k(e.pivots[static_cast<std::size_t>(i)], col) = -e.reduced(i, f);
    ++col;
  }
  return k;
}

/// Linearly independent subset of the columns spanning the column space
/// (the first maximal independent subset in column order).
template <class T>
Mat<T> column_basis(const Mat<T>& m) {
  if (m.cols() == 0 || m.rows() == 0) return Mat<T>(m.rows(), 0);
  const RowEchelon<T> e = rref<T>(m);
  Mat<T> b(m.rows(), e.rank());
  for (Index i = 0; i < e.rank(); ++i) b.col(i) = m.col(e.pivots[static_cast<std::size_t>(i)]);
  return b;
}

/// Some x with m x = b, or nullopt.
template <class T>
std::optional<Vec<T>> solve(const Mat<T>& m, const Vec<T>& b) {
  Mat<T> aug(m.rows(), m.cols() + 1);
  aug << m, b;
  const RowEchelon<T> e = rref<T>(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec<T> x = Vec<T>::Zero(m.cols());
  for (Index i = 0; i < e.rank(); ++i) x(e.pivots[static_cast<std::size_t>(i)]) = e.reduced(i, m.cols());
  return x;
}

/// Some X with m X = b (column by column), or nullopt.
template <class T>
std::optional<Mat<T>> solve(const Mat<T>& m, const Mat<T>& b) {
  Mat<T> aug(m.rows(), m.cols() + b.cols());
  aug << m, b;
  const RowEchelon<T> e = rref<T>(aug);
  for (Index p : e.pivots) {
    if (p >= m.cols()) return std::nullopt;
  }
  Mat<T> x = Mat<T>::Zero(m.cols(), b.cols());
  for (Index i = 0; i < e.rank(); ++i) x.row(e.pivots[static_cast<std::size_t>(i)]) = e.reduced.row(i).tail(b.cols());
  return x;
}

template <class T>
Mat<T> inverse(const Mat<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  auto x = solve<T>(m, Mat<T>(Mat<T>::Identity(m.rows(), m.rows())));
  if (!x) throw std::domain_error("singular matrix");
  return *x;
}

template <class T>
T determinant(Mat<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const Index n = m.rows();
  T det(1);
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    while (p < n && entry_is_zero(m(p, c))) ++p;
    if (p == n) return T(0);
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    const T inv = T(1) / m(c, c);
    for (Index i = c + 1; i < n; ++i) {
      if (entry_is_zero(m(i, c))) continue;
      const T f = m(i, c) * inv;
      for (Index j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class T>
bool is_zero(const Mat<T>& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!entry_is_zero(m(i, j))) return false;
  return true;
}

/// Dense product without relying on Eigen's blocked kernels; skips zeros,
/// which dominate the structured matrices built here.
template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
  assert(a.cols() == b.rows());
  Mat<T> c = Mat<T>::Zero(a.rows(), b.cols());
  T tmp;
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index k = 0; k < a.cols(); ++k) {
      const T& bkj = b(k, j);
      if (entry_is_zero(bkj)) continue;
      for (Index i = 0; i < a.rows(); ++i) {
        if (entry_is_zero(a(i, k))) continue;
        add_product(c(i, j), a(i, k), bkj, tmp);
      }
    }
  }
  return c;
}

template <class T>
Vec<T> mul(const Mat<T>& a, const Vec<T>& v) {
  assert(a.cols() == v.rows());
  Vec<T> c = Vec<T>::Zero(a.rows());
  T tmp;
  for (Index k = 0; k < a.cols(); ++k) {
    if (entry_is_zero(v(k))) continue;
    for (Index i = 0; i < a.rows(); ++i) {
      if (entry_is_zero(a(i, k))) continue;
      add_product(c(i), a(i, k), v(k), tmp);
    }
  }
  return c;
}

template <class T>
Mat<T> hstack(const std::vector<Mat<T>>& blocks, Index rows) {
  Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Mat<T> out(rows, cols);
  Index at = 0;
  for (const auto& b : blocks) {
    assert(b.rows() == rows);
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

template <class T>
Mat<T> vstack(const std::vector<Mat<T>>& blocks, Index cols) {
  Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Mat<T> out(rows, cols);
  Index at = 0;
  for (const auto& b : blocks) {
    assert(b.cols() == cols);
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

/// A subspace given by a full-column-rank basis, with fast exact coordinates:
/// a set of pivot rows on which the basis is invertible is found once.
template <class T>
class ColumnSpace {
 public:
  ColumnSpace() = default;
  explicit ColumnSpace(Mat<T> basis) : basis_(std::move(basis)) {
    const Index r = basis_.cols();
    if (r == 0) return;
    if (unit_rows()) return;
    const RowEchelon<T> e = rref<T>(Mat<T>(basis_.transpose()));
    if (e.rank() != r) throw std::invalid_argument("ColumnSpace basis is not independent");
    pivot_rows_ = e.pivots;
    Mat<T> square(r, r);
    for (Index i = 0; i < r; ++i) square.row(i) = basis_.row(pivot_rows_[static_cast<std::size_t>(i)]);
    pivot_inverse_ = fanih::inverse<T>(square);
  }

  const Mat<T>& basis() const { return basis_; }
  Index dim() const { return basis_.cols(); }
  Index ambient() const { return basis_.rows(); }
  const std::vector<Index>& pivot_rows() const { return pivot_rows_; }
  const Mat<T>& pivot_inverse() const { return pivot_inverse_; }

  /// dim x ambient matrix L with L * basis = identity.
  Mat<T> left_inverse() const {
    Mat<T> l = Mat<T>::Zero(dim(), ambient());
    for (Index i = 0; i < dim(); ++i) l.col(pivot_rows_[static_cast<std::size_t>(i)]) = pivot_inverse_.col(i);
    return l;
  }

  /// Coordinates assuming v lies in the span (unchecked).
  Vec<T> coords_unchecked(const Vec<T>& v) const {
    Vec<T> sel(dim());
    for (Index i = 0; i < dim(); ++i) sel(i) = v(pivot_rows_[static_cast<std::size_t>(i)]);
    return mul<T>(pivot_inverse_, sel);
  }

  std::optional<Vec<T>> coords(const Vec<T>& v) const {
    Vec<T> c = coords_unchecked(v);
    if (mul<T>(basis_, c) != v) return std::nullopt;
    return c;
  }

  bool contains(const Vec<T>& v) const { return coords(v).has_value(); }

  /// Coordinates of every column of m (checked).
  std::optional<Mat<T>> coords(const Mat<T>& m) const {
    Mat<T> sel(dim(), m.cols());
    for (Index i = 0; i < dim(); ++i) sel.row(i) = m.row(pivot_rows_[static_cast<std::size_t>(i)]);
    Mat<T> c = mul<T>(pivot_inverse_, sel);
    if (mul<T>(basis_, c) != m) return std::nullopt;
    return c;
  }

 private:
  // Kernel bases carry an identity block on their free coordinates; reuse it.
  bool unit_rows() {
    const Index r = basis_.cols();
    std::vector<Index> rows(static_cast<std::size_t>(r), -1);
    for (Index i = 0; i < basis_.rows(); ++i) {
      Index one = -1;
      bool unit = true;
      for (Index j = 0; j < r && unit; ++j) {
        if (entry_is_zero(basis_(i, j))) continue;
        if (one >= 0 || basis_(i, j) != T(1)) unit = false;
        one = j;
      }
      if (unit && one >= 0 && rows[static_cast<std::size_t>(one)] < 0) rows[static_cast<std::size_t>(one)] = i;
    }
    for (Index p : rows) {
      if (p < 0) return false;
    }
    pivot_rows_ = std::move(rows);
    pivot_inverse_ = Mat<T>::Identity(r, r);
    return true;
  }

  Mat<T> basis_;
  std::vector<Index> pivot_rows_;
  Mat<T> pivot_inverse_;
};

}  // namespace fanih
