#pragma once

// Dense real linear algebra: Cholesky, LU determinant, and the generalized
// symmetric-definite eigenproblem A x = λ B x.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "phlab/error.hpp"

namespace phlab {

/// Row-major dense matrix.
template <typename Real = double>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, Real fill = Real(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = Real(1);
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Real operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<Real> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Real> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<Real> column(std::size_t j) const {
    std::vector<Real> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  const std::vector<Real>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using Matrix = BasicMatrix<double>;

/// Dense symmetric matrix; every write is mirrored so both triangles agree.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n, n) {}

  static SymMatrix from_dense(const Matrix& a) {
    detail::require(a.rows() == a.cols(), "SymMatrix: matrix is not square");
    SymMatrix s(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j <= i; ++j) s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    return s;
  }
  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
  }
  static SymMatrix identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
  }

  std::size_t size() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add(std::size_t i, std::size_t j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }
  const Matrix& dense() const { return m_; }

  /// Frobenius norm.
  double norm() const {
    double s = 0.0;
    for (double v : m_.data()) s += v * v;
    return std::sqrt(s);
  }

 private:
  Matrix m_;
};

inline std::vector<double> multiply(const SymMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto r = a.dense().row(i);
    y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
  }
  return y;
}

inline double quadratic_form(const SymMatrix& a, std::span<const double> x) {
  auto ax = multiply(a, x);
  return std::inner_product(ax.begin(), ax.end(), x.begin(), 0.0);
}

/// Lower-triangular L with L Lᵀ = M. Throws NotPositiveDefinite naming the failing pivot.
template <typename Real = double>
BasicMatrix<Real> cholesky_spd(const SymMatrix& m) {
  const std::size_t n = m.size();
  BasicMatrix<Real> L(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Real d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > Real(0))) throw NotPositiveDefinite(j);
    const Real ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Real s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / ljj;
    }
  }
  return L;
}

/// sign(det) and log|det| from LU with partial pivoting; sign is 0 for an exactly singular matrix.
struct DetIndicator {
  int sign = 0;
  double log_magnitude = -std::numeric_limits<double>::infinity();
};

inline DetIndicator lu_determinant(Matrix a) {
  detail::require(a.rows() == a.cols(), "lu_determinant: matrix is not square");
  const std::size_t n = a.rows();
  DetIndicator out{1, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == 0.0) return DetIndicator{};
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      out.sign = -out.sign;
    }
    const double pivot = a(k, k);
    if (pivot < 0.0) out.sign = -out.sign;
    out.log_magnitude += std::log(std::abs(pivot));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return out;
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i pairs with values[i]
};

namespace detail {

// Householder reduction to tridiagonal form followed by implicit QL with
// shifts (the EISPACK tred2/tql2 pair). The reduction starts from the last
// row, which suits the graded matrices produced by polynomial bases where
// the large entries sit in the bottom-right corner.
template <typename Real>
void symmetric_tridiagonal_ql(BasicMatrix<Real>& V, std::vector<Real>& d, std::vector<Real>& e) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = V.rows();
  d.assign(n, Real(0));
  e.assign(n, Real(0));
  if (n == 0) return;

  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    Real scale = 0, h = 0;
    for (std::size_t k = 0; k < i; ++k) scale += abs(d[k]);
    if (scale == Real(0)) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0;
        V(j, i) = 0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      Real f = d[i - 1];
      Real g = sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const Real hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0;
      }
    }
    d[i] = h;
  }

  // Accumulate the transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1;
    const Real h = d[i + 1];
    if (h != Real(0)) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        Real g = 0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0;
  }
  V(n - 1, n - 1) = 1;
  e[0] = 0;

  // Implicit QL on the tridiagonal matrix.
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;

  const Real eps = std::numeric_limits<Real>::epsilon();
  Real f = 0, tst1 = 0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, abs(d[l]) + abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) fail(ErrorKind::Numerical, "symmetric eigensolver: QL iteration did not converge");
        Real g = d[l];
        Real p = (d[l + 1] - g) / (Real(2) * e[l]);
        Real r = std::hypot(p, Real(1));
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const Real dl1 = d[l + 1];
        Real h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        Real c = 1, c2 = 1, c3 = 1, s = 0, s2 = 0;
        const Real el1 = e[l + 1];
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = V(k, ii + 1);
            V(k, ii + 1) = s * V(k, ii) + c * h;
            V(k, ii) = c * V(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0;
  }
}

}  // namespace detail

/// Full eigensystem of a symmetric matrix, ascending. Real selects the working precision.
template <typename Real = double>
EigenDecomposition symmetric_eig(const SymMatrix& a) {
  const std::size_t n = a.size();
  BasicMatrix<Real> V(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) V(i, j) = a(i, j);
  std::vector<Real> d, e;
  detail::symmetric_tridiagonal_ql(V, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = static_cast<double>(d[order[c]]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = static_cast<double>(V(i, order[c]));
  }
  return out;
}

/// Solves A x = λ B x for symmetric A and symmetric positive definite B by
/// reducing to L⁻¹ A L⁻ᵀ with B = L Lᵀ. Eigenvectors come back B-orthonormal.
template <typename Real = double>
EigenDecomposition generalized_sym_eig(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size())
    detail::fail(ErrorKind::InvalidArgument, "generalized_sym_eig: dimension mismatch (" +
                                                 std::to_string(a.size()) + " vs " +
                                                 std::to_string(b.size()) + ")");
  const std::size_t n = a.size();
  const BasicMatrix<Real> L = cholesky_spd<Real>(b);

  // X = L⁻¹ A, then C = L⁻¹ Xᵀ = L⁻¹ A L⁻ᵀ.
  BasicMatrix<Real> X(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Real s = a(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * X(k, c);
      X(i, c) = s / L(i, i);
    }
  }
  BasicMatrix<Real> C(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Real s = X(c, i);
      for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * C(k, c);
      C(i, c) = s / L(i, i);
    }
  }
  // Symmetrize and hand to the tridiagonal solver at working precision.
  BasicMatrix<Real> V(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) V(i, j) = V(j, i) = (C(i, j) + C(j, i)) / Real(2);
  std::vector<Real> d, e;
  detail::symmetric_tridiagonal_ql(V, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  std::vector<Real> y(n), x(n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = static_cast<double>(d[order[c]]);
    for (std::size_t i = 0; i < n; ++i) y[i] = V(i, order[c]);
    // x = L⁻ᵀ y
    for (std::size_t i = n; i-- > 0;) {
      Real s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= L(k, i) * x[k];
      x[i] = s / L(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = static_cast<double>(x[i]);
  }
  return out;
}

}  // namespace phlab
