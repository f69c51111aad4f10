// Dense integer matrices and the exact linear algebra the K-group
// computations are built on: Smith normal form with recorded unimodular
// transforms, column-style Hermite normal form, integer kernels, exact
// linear solves, and a fraction-free determinant.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graphk/bigint.hpp"

namespace graphk {

class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const Int& x : a_)
      if (x != 0) return false;
    return true;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& x = at(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += x * o.at(k, j);
      }
    return r;
  }

  std::vector<Int> apply(const std::vector<Int>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix apply: shape mismatch");
    std::vector<Int> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<Int> col(std::size_t j) const {
    std::vector<Int> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(i, j), at(k, j));
  }
  void swap_cols(std::size_t j, std::size_t l) {
    if (j == l) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, j), at(i, l));
  }
  // row i += c * row k
  void add_row(std::size_t i, std::size_t k, const Int& c) {
    if (c == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) += c * at(k, j);
  }
  // col j += c * col l
  void add_col(std::size_t j, std::size_t l, const Int& c) {
    if (c == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) += c * at(i, l);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = -at(i, j);
  }

  // Columns of `this` followed by columns of `o`.
  static Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
    Matrix r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
      for (std::size_t j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
  }

  Matrix first_cols(std::size_t n) const {
    Matrix r(rows_, n);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < n; ++j) r.at(i, j) = at(i, j);
    return r;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> a_;
};

// U * A * Vt = D with U, Vt unimodular and D diagonal, each diagonal entry
// nonnegative and dividing the next.  The inverses are accumulated alongside
// so callers can change basis in both directions without re-solving.
struct SmithDecomposition {
  Matrix u, d, vt;
  Matrix u_inv, vt_inv;
  std::size_t rank = 0;

  Int diag(std::size_t i) const {
    return i < std::min(d.rows(), d.cols()) ? d.at(i, i) : Int(0);
  }
};

namespace detail {

// Position of a nonzero entry of minimal absolute value in the submatrix
// with corner (t, t), scanning row-major so ties break deterministically.
inline bool min_abs_pivot(const Matrix& d, std::size_t t, std::size_t& pi,
                          std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      const Int& x = d.at(i, j);
      if (x == 0) continue;
      Int a = abs_int(x);
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace detail

inline SmithDecomposition smith(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithDecomposition s;
  s.d = a;
  s.u = Matrix::identity(m);
  s.u_inv = Matrix::identity(m);
  s.vt = Matrix::identity(n);
  s.vt_inv = Matrix::identity(n);

  Matrix& d = s.d;
  // Every mutation of d is mirrored on the transforms so that
  // u * a * vt == d and u * u_inv == I, vt * vt_inv == I stay true.
  auto row_swap = [&](std::size_t i, std::size_t k) {
    d.swap_rows(i, k);
    s.u.swap_rows(i, k);
    s.u_inv.swap_cols(i, k);
  };
  auto col_swap = [&](std::size_t j, std::size_t l) {
    d.swap_cols(j, l);
    s.vt.swap_cols(j, l);
    s.vt_inv.swap_rows(j, l);
  };
  auto row_add = [&](std::size_t i, std::size_t k, const Int& c) {
    d.add_row(i, k, c);
    s.u.add_row(i, k, c);
    s.u_inv.add_col(k, i, -c);
  };
  auto col_add = [&](std::size_t j, std::size_t l, const Int& c) {
    d.add_col(j, l, c);
    s.vt.add_col(j, l, c);
    s.vt_inv.add_row(l, j, -c);
  };
  auto row_negate = [&](std::size_t i) {
    d.negate_row(i);
    s.u.negate_row(i);
    s.u_inv.negate_col(i);
  };

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      std::size_t pi = t, pj = t;
      if (!detail::min_abs_pivot(d, t, pi, pj)) {
        t = steps;  // submatrix is zero; diagonal is complete
        break;
      }
      row_swap(t, pi);
      col_swap(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d.at(i, t) == 0) continue;
        Int q = d.at(i, t) / d.at(t, t);
        row_add(i, t, -q);
        if (d.at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d.at(t, j) == 0) continue;
        Int q = d.at(t, j) / d.at(t, t);
        col_add(j, t, -q);
        if (d.at(t, j) != 0) clean = false;
      }
      if (!clean) continue;  // remainders became new, smaller pivot candidates

      // Pivot now alone in its row and column; enforce divisibility of the
      // remaining submatrix by folding a bad row into row t and retrying.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n && divides; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            row_add(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (t == steps) break;
  }

  for (std::size_t t = 0; t < steps; ++t)
    if (d.at(t, t) < 0) row_negate(t);

  s.rank = 0;
  for (std::size_t t = 0; t < steps; ++t)
    if (d.at(t, t) != 0) ++s.rank;
  return s;
}

// Canonical basis of the column lattice: column-style Hermite normal form.
// Pivots are positive, sit in strictly increasing rows with nothing above
// them, and earlier columns are reduced mod the pivot in each pivot row.
// Zero columns are dropped, so equal lattices yield equal matrices.
inline Matrix hnf_basis(const Matrix& a) {
  Matrix h = a;
  const std::size_t m = h.rows(), n = h.cols();
  std::size_t r = 0;
  for (std::size_t i = 0; i < m && r < n; ++i) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t j = r; j < n; ++j) {
        if (h.at(i, j) == 0) continue;
        if (best == n || abs_int(h.at(i, j)) < abs_int(h.at(i, best))) best = j;
      }
      if (best == n) break;
      h.swap_cols(r, best);
      bool clean = true;
      for (std::size_t j = r + 1; j < n; ++j) {
        if (h.at(i, j) == 0) continue;
        Int q = h.at(i, j) / h.at(i, r);
        h.add_col(j, r, -q);
        if (h.at(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h.at(i, r) == 0) continue;
    if (h.at(i, r) < 0) h.negate_col(r);
    for (std::size_t j = 0; j < r; ++j) {
      Int q = fdiv(h.at(i, j), h.at(i, r));
      h.add_col(j, r, -q);
    }
    ++r;
  }
  return h.first_cols(r);
}

inline bool lattices_equal(const Matrix& a, const Matrix& b) {
  return hnf_basis(a) == hnf_basis(b);
}

// Basis of the integer kernel {x : A x = 0}, canonicalized through the
// Hermite form.  The returned columns span every integer solution, and for
// a saturated lattice like a kernel each column is primitive.
inline Matrix kernel_basis(const Matrix& a) {
  SmithDecomposition s = smith(a);
  const std::size_t n = a.cols();
  Matrix k(n, n - s.rank);
  for (std::size_t j = s.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k.at(i, j - s.rank) = s.vt.at(i, j);
  return hnf_basis(k);
}

// One integer solution of A x = b, if any exists.
inline std::optional<std::vector<Int>> solve(const Matrix& a,
                                             const std::vector<Int>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: shape mismatch");
  SmithDecomposition s = smith(a);
  std::vector<Int> z = s.u.apply(b);
  std::vector<Int> y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i < s.rank) {
      if (z[i] % s.d.at(i, i) != 0) return std::nullopt;
      y[i] = z[i] / s.d.at(i, i);
    } else if (z[i] != 0) {
      return std::nullopt;
    }
  }
  return s.vt.apply(y);
}

inline bool in_column_lattice(const Matrix& a, const std::vector<Int>& b) {
  return solve(a, b).has_value();
}

// Bareiss fraction-free elimination; every division is exact.
inline Int det_bareiss(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det: not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Matrix m = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t p = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

}  // namespace graphk
