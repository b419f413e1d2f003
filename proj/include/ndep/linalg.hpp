#pragma once

#include <vector>

#include "ndep/errors.hpp"

namespace ndep {
namespace algebra {

/* Dense matrix over an exact field element type E.  E must provide the four
   arithmetic operators, unary minus, .inverse(), and the free shims
   is_zero(e) / zero_like(e) / one_like(e). */
template <class E>
class Mat {
public:
  Mat(int rows, int cols, const E& fill)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * static_cast<size_t>(cols), fill) {
    if (rows < 1 || cols < 1) throw DomainError("matrix dimensions must be positive");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  E& at(int i, int j) { return a_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)]; }
  const E& at(int i, int j) const {
    return a_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)];
  }

  static Mat identity(int n, const E& exemplar) {
    Mat m(n, n, zero_like(exemplar));
    for (int i = 0; i < n; ++i) m.at(i, i) = one_like(exemplar);
    return m;
  }

private:
  int rows_, cols_;
  std::vector<E> a_;
};

/* Determinant by Gaussian elimination; pivots are the first row with a
   nonzero entry in the current column. */
template <class E>
E det(Mat<E> m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  int n = m.rows();
  E acc = one_like(m.at(0, 0));
  bool negate = false;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!is_zero(m.at(r, col))) {
        pivot = r;
        break;
      }
    if (pivot < 0) {
      /* Column vanished; report zero only to the joint precision at which the
         entries are actually known (x - x keeps each entry's own marker). */
      E z = m.at(col, col) - m.at(col, col);
      for (int r = col + 1; r < n; ++r) z = z + (m.at(r, col) - m.at(r, col));
      return acc * z;
    }
    if (pivot != col) {
      for (int j = col; j < n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
      negate = !negate;
    }
    acc = acc * m.at(col, col);
    E pinv = m.at(col, col).inverse();
    for (int r = col + 1; r < n; ++r) {
      if (is_zero(m.at(r, col))) continue;
      E f = m.at(r, col) * pinv;
      for (int j = col; j < n; ++j) m.at(r, j) = m.at(r, j) - f * m.at(col, j);
    }
  }
  return negate ? -acc : acc;
}

/* Gauss-Jordan inverse; throws DomainError("singular matrix") when no pivot
   can be found in some column. */
template <class E>
Mat<E> inverse(const Mat<E>& in) {
  if (in.rows() != in.cols()) throw DomainError("inverse of a non-square matrix");
  int n = in.rows();
  Mat<E> m = in;
  Mat<E> r = Mat<E>::identity(n, in.at(0, 0));
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (!is_zero(m.at(row, col))) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw DomainError("singular matrix");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m.at(pivot, j), m.at(col, j));
        std::swap(r.at(pivot, j), r.at(col, j));
      }
    E pinv = m.at(col, col).inverse();
    for (int j = 0; j < n; ++j) {
      m.at(col, j) = m.at(col, j) * pinv;
      r.at(col, j) = r.at(col, j) * pinv;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || is_zero(m.at(row, col))) continue;
      E f = m.at(row, col);
      for (int j = 0; j < n; ++j) {
        m.at(row, j) = m.at(row, j) - f * m.at(col, j);
        r.at(row, j) = r.at(row, j) - f * r.at(col, j);
      }
    }
  }
  return r;
}

template <class E>
std::vector<E> mat_vec(const Mat<E>& m, const std::vector<E>& v) {
  if (static_cast<int>(v.size()) != m.cols()) throw DomainError("matrix/vector shape mismatch");
  std::vector<E> out;
  out.reserve(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    E acc = zero_like(m.at(0, 0));
    for (int j = 0; j < m.cols(); ++j) acc = acc + m.at(i, j) * v[static_cast<size_t>(j)];
    out.push_back(acc);
  }
  return out;
}

template <class E>
std::vector<E> solve(const Mat<E>& m, const std::vector<E>& rhs) {
  return mat_vec(inverse(m), rhs);
}

}  // namespace algebra
}  // namespace ndep
