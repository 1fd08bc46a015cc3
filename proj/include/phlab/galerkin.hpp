#pragma once

// Conforming spectral-Galerkin discretization of the polyharmonic form
// ∫ D^m u · D^m v = Λ ∫ u v on axis-aligned rectangles.
//
// Neumann (H^m): tensor products of Legendre polynomials P_i.
// Dirichlet (H^m_0): tensor products of (1 - t^2)^m P_i, which vanish with
// their first m-1 derivatives at t = ±1, so the discrete space sits inside
// H^m_0 and every computed eigenvalue is an upper bound by min-max.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phlab/core.hpp"
#include "phlab/linalg.hpp"
#include "phlab/quadrature.hpp"

namespace phlab::galerkin {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// 1D shape functions on the reference interval [-1, 1].
class ShapeBasis1D {
 public:
  ShapeBasis1D(BoundaryKind bc, OperatorOrder m, int n) : bc_(bc), m_(m), n_(n) {
    detail::require(n >= 1, "ShapeBasis1D: n must be >= 1");
    // (1 - t^2)^m = Σ_k C(m,k) (-1)^k t^{2k}
    weight_.assign(2 * m.value() + 1, 0.0);
    for (int k = 0; k <= m.value(); ++k)
      weight_[2 * k] = binomial(m.value(), k) * (k % 2 == 0 ? 1.0 : -1.0);
  }

  BoundaryKind bc() const { return bc_; }
  int m() const { return m_.value(); }
  int size() const { return n_; }
  /// Highest polynomial degree in the basis.
  int degree() const { return n_ - 1 + (bc_ == BoundaryKind::Dirichlet ? 2 * m() : 0); }

  /// table[i][r] = d^r φ_i / dt^r at t, r = 0..max_deriv.
  std::vector<std::vector<double>> table(double t, int max_deriv) const {
    auto p = legendre_table(n_, t, max_deriv);
    if (bc_ == BoundaryKind::Neumann) return p;
    std::vector<double> w(max_deriv + 1);
    for (int r = 0; r <= max_deriv; ++r) w[r] = weight_derivative(r, t);
    std::vector<std::vector<double>> out(n_, std::vector<double>(max_deriv + 1, 0.0));
    for (int i = 0; i < n_; ++i)
      for (int a = 0; a <= max_deriv; ++a) {
        double s = 0.0;
        for (int r = 0; r <= a; ++r) s += binomial(a, r) * w[r] * p[i][a - r];
        out[i][a] = s;
      }
    return out;
  }

 private:
  double weight_derivative(int r, double t) const {
    // d^r/dt^r of Σ_j c_j t^j
    double s = 0.0;
    for (std::size_t j = r; j < weight_.size(); ++j) {
      if (weight_[j] == 0.0) continue;
      double f = weight_[j];
      for (int q = 0; q < r; ++q) f *= static_cast<double>(j - q);
      s += f * std::pow(t, static_cast<double>(j - r));
    }
    return s;
  }

  BoundaryKind bc_;
  OperatorOrder m_;
  int n_;
  std::vector<double> weight_;
};

/// G^{(a,b)}_{ij} = ∫_{-1}^{1} φ_i^{(a)} φ_j^{(b)} dt for 0 <= a, b <= m.
struct DerivativeGram {
  int m = 0;
  std::vector<std::vector<Matrix>> blocks;
  const Matrix& operator()(int a, int b) const { return blocks[a][b]; }
};

inline int minimum_gram_nodes(const ShapeBasis1D& basis) { return basis.size() + 2 * basis.m() + 2; }

inline DerivativeGram derivative_gram(const ShapeBasis1D& basis, int quad_nodes) {
  if (quad_nodes < minimum_gram_nodes(basis))
    detail::fail(ErrorKind::InvalidArgument,
                 "derivative_gram: quad_nodes=" + std::to_string(quad_nodes) +
                     " below exactness threshold " + std::to_string(minimum_gram_nodes(basis)));
  const int m = basis.m();
  const int n = basis.size();
  const auto rule = gauss_legendre(quad_nodes);
  DerivativeGram g{m, std::vector<std::vector<Matrix>>(m + 1, std::vector<Matrix>(m + 1, Matrix(n, n)))};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto tab = basis.table(rule.nodes[q], m);
    const double w = rule.weights[q];
    for (int a = 0; a <= m; ++a)
      for (int b = 0; b <= m; ++b)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g.blocks[a][b](i, j) += w * tab[i][a] * tab[j][b];
  }
  return g;
}

/// Stiffness/mass pencil on a rectangle, flat index i_x * n + i_y.
struct AssembledPencil {
  SymMatrix stiffness;
  SymMatrix mass;
  int n = 0;
  Rectangle rect;
  std::size_t flat(int ix, int iy) const { return static_cast<std::size_t>(ix) * n + iy; }
};

namespace detail {
inline SymMatrix kron_sym(const Matrix& gx, const Matrix& gy, double factor) {
  const std::size_t n = gx.rows();
  SymMatrix out(n * n);
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2)
      for (std::size_t j1 = 0; j1 < n; ++j1)
        for (std::size_t j2 = 0; j2 < n; ++j2) {
          const std::size_t r = i1 * n + i2, c = j1 * n + j2;
          if (c > r) continue;
          out.set(r, c, factor * gx(i1, j1) * gy(i2, j2));
        }
  return out;
}

inline void accumulate(SymMatrix& into, const SymMatrix& add) {
  for (std::size_t i = 0; i < into.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) into.add(i, j, add(i, j));
}
}  // namespace detail

/// A = Σ_a C(m,a) s_x^{2a} s_y^{2(m-a)} J G^{(a,a)} ⊗ G^{(m-a,m-a)}, s = 2/side, J = lx ly / 4.
/// The binomial groups the C(m,a) ordered index tuples that give the same mixed partial.
inline SymMatrix assemble_stiffness(const DerivativeGram& g, const Rectangle& rect) {
  const int m = g.m;
  const std::size_t n = g(0, 0).rows();
  const double jac = rect.lx * rect.ly / 4.0;
  const double sx = 2.0 / rect.lx, sy = 2.0 / rect.ly;
  SymMatrix a(n * n);
  for (int k = 0; k <= m; ++k) {
    const double factor = binomial(m, k) * std::pow(sx, 2 * k) * std::pow(sy, 2 * (m - k)) * jac;
    detail::accumulate(a, detail::kron_sym(g(k, k), g(m - k, m - k), factor));
  }
  return a;
}

inline SymMatrix assemble_mass(const DerivativeGram& g, const Rectangle& rect) {
  return detail::kron_sym(g(0, 0), g(0, 0), rect.lx * rect.ly / 4.0);
}

inline AssembledPencil assemble(OperatorOrder m, BoundaryKind bc, int n, const Rectangle& rect) {
  phlab::detail::require(n >= m.value() + 1, "assemble: n must be >= m + 1");
  const ShapeBasis1D basis(bc, m, n);
  const auto g = derivative_gram(basis, minimum_gram_nodes(basis));
  return AssembledPencil{assemble_stiffness(g, rect), assemble_mass(g, rect), n, rect};
}

inline SymMatrix assemble_stiffness(OperatorOrder m, BoundaryKind bc, int n, const Rectangle& rect) {
  return assemble(m, bc, n, rect).stiffness;
}

inline SymMatrix assemble_mass(OperatorOrder m, BoundaryKind bc, int n, const Rectangle& rect) {
  phlab::detail::require(n >= 1, "assemble_mass: n must be >= 1");
  const ShapeBasis1D basis(bc, m, n);
  return assemble_mass(derivative_gram(basis, minimum_gram_nodes(basis)), rect);
}

/// 70% of the basis dimension n^2; the top of a discrete spectrum is not trusted.
inline std::size_t trusted_count(int n) { return static_cast<std::size_t>(7 * n * n / 10); }

/// Discrete eigenpairs plus what is needed to evaluate the eigenfunctions.
struct GalerkinSolution {
  Spectrum spectrum;
  Matrix vectors;  // column k: B-orthonormal coefficients of eigenfunction k (0-based)
  ShapeBasis1D basis;
  Rectangle rect;

  int n() const { return basis.size(); }
};

inline GalerkinSolution solve_2d(OperatorOrder m, BoundaryKind bc, int n, const Rectangle& rect,
                                 std::size_t count, const ToleranceConfig& tol = {}) {
  const std::size_t trusted = trusted_count(n);
  if (count > trusted)
    phlab::detail::fail(ErrorKind::Capability,
                        "solve_2d_spectrum: count=" + std::to_string(count) +
                            " exceeds trusted_count=" + std::to_string(trusted) + " for n=" +
                            std::to_string(n));
  const auto pencil = assemble(m, bc, n, rect);
  const auto eig = generalized_sym_eig<long double>(pencil.stiffness, pencil.mass);
  std::vector<double> values(eig.values.begin(), eig.values.begin() + count);
  Matrix vectors(eig.vectors.rows(), count);
  for (std::size_t i = 0; i < vectors.rows(); ++i)
    for (std::size_t c = 0; c < count; ++c) vectors(i, c) = eig.vectors(i, c);
  Spectrum spec(m, bc, Domain::rectangle(rect.lx, rect.ly), std::move(values), Galerkin2D{n}, count,
                tol.tol_zero);
  return GalerkinSolution{std::move(spec), std::move(vectors), ShapeBasis1D(bc, m, n), rect};
}

inline Spectrum solve_2d_spectrum(OperatorOrder m, BoundaryKind bc, int n, const Rectangle& rect,
                                  std::size_t count, const ToleranceConfig& tol = {}) {
  return solve_2d(m, bc, n, rect, count, tol).spectrum;
}

/// Eigenvalues per k across a sequence of nested discretizations.
struct ConvergenceTable {
  std::vector<int> n_list;
  std::vector<std::vector<double>> values;  // values[i][k-1] at n_list[i]
  std::vector<double> error_estimate;       // |λ̂_k(n_last) - λ̂_k(n_prev)|
  double max_increase = 0.0;                // largest λ̂_k(n_{i+1}) - λ̂_k(n_i), <= 0 when nested

  std::size_t count() const { return error_estimate.size(); }
  const std::vector<double>& finest() const { return values.back(); }
  bool monotone(double slack = 1e-8) const { return max_increase <= slack; }
};

/// Builds the table from per-n eigenvalue lists (each at least `count` long).
inline ConvergenceTable tabulate_convergence(const std::vector<int>& n_list,
                                             const std::vector<std::vector<double>>& spectra,
                                             std::size_t count) {
  phlab::detail::require(n_list.size() >= 2, "convergence_study: need at least two n values");
  phlab::detail::require(spectra.size() == n_list.size(), "convergence_study: one spectrum per n");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    phlab::detail::require(n_list[i] > n_list[i - 1], "convergence_study: n_list must increase");
  ConvergenceTable t;
  t.n_list = n_list;
  for (const auto& s : spectra) {
    phlab::detail::require(s.size() >= count, "convergence_study: spectrum shorter than count");
    t.values.emplace_back(s.begin(), s.begin() + count);
  }
  const auto& last = t.values.back();
  const auto& prev = t.values[t.values.size() - 2];
  for (std::size_t k = 0; k < count; ++k) t.error_estimate.push_back(std::abs(last[k] - prev[k]));
  t.max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.values.size(); ++i)
    for (std::size_t k = 0; k < count; ++k)
      t.max_increase = std::max(t.max_increase, t.values[i][k] - t.values[i - 1][k]);
  return t;
}

inline ConvergenceTable convergence_study(OperatorOrder m, BoundaryKind bc, const Rectangle& rect,
                                          const std::vector<int>& n_list, std::size_t count,
                                          const ToleranceConfig& tol = {}) {
  phlab::detail::require(n_list.size() >= 2, "convergence_study: need at least two n values");
  std::vector<std::vector<double>> spectra;
  for (int n : n_list) spectra.push_back(solve_2d_spectrum(m, bc, n, rect, count, tol).values());
  return tabulate_convergence(n_list, spectra, count);
}

}  // namespace phlab::galerkin
