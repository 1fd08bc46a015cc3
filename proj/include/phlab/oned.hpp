#pragma once

// Exact 1D polyharmonic spectra on (0, L) from the characteristic determinant
// of the general ODE solution.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "phlab/core.hpp"
#include "phlab/linalg.hpp"

namespace phlab::oned {

using cplx = std::complex<double>;

/// The 2m roots ρ of (-1)^m ρ^{2m} = λ, i.e. e^{u(x)} = e^{ρx} solves (-1)^m u^{(2m)} = λ u.
struct CharacteristicRoots {
  int m = 1;
  double lambda = 0.0;
  std::vector<cplx> roots;
};

namespace detail {
// Angle index q for root j: ρ_j = λ^{1/2m} e^{iπ q / (2m)} with q = m + 2j.
inline int angle_index(int m, int j) { return (m + 2 * j) % (4 * m); }

inline cplx unit_root(int m, int q) {
  // Exact values on the axes so real/imaginary roots are classified without rounding noise.
  const int r = q % (4 * m);
  if (r == 0) return {1.0, 0.0};
  if (r == m) return {0.0, 1.0};
  if (r == 2 * m) return {-1.0, 0.0};
  if (r == 3 * m) return {0.0, -1.0};
  const double angle = std::numbers::pi * r / (2.0 * m);
  return {std::cos(angle), std::sin(angle)};
}
}  // namespace detail

inline CharacteristicRoots characteristic_roots(OperatorOrder m, double lambda) {
  phlab::detail::require(lambda > 0.0 && std::isfinite(lambda),
                         "characteristic_roots: lambda must be > 0");
  const int mm = m.value();
  const double beta = std::pow(lambda, 1.0 / (2.0 * mm));
  CharacteristicRoots out{mm, lambda, {}};
  for (int j = 0; j < 2 * mm; ++j) out.roots.push_back(beta * detail::unit_root(mm, detail::angle_index(mm, j)));
  return out;
}

/// Real solution basis on [0, L] at scale β = λ^{1/2m}. Each conjugate pair
/// a ± ib (b > 0) gives e^{a(x-s)}cos(bx), e^{a(x-s)}sin(bx); each real root a
/// gives e^{a(x-s)}. The shift s = L for a > 0 and 0 otherwise keeps every
/// exponential envelope <= 1 on the interval.
class RealSolutionBasis {
 public:
  RealSolutionBasis(OperatorOrder m, double beta, double length) : beta_(beta), length_(length) {
    const int mm = m.value();
    for (int j = 0; j < 2 * mm; ++j) {
      const cplx z = detail::unit_root(mm, detail::angle_index(mm, j));
      if (z.imag() < 0.0) continue;  // represented by its conjugate partner
      const double shift = z.real() > 0.0 ? length : 0.0;
      if (z.imag() == 0.0) {
        columns_.push_back({z, shift, Part::Exponential});
      } else {
        columns_.push_back({z, shift, Part::Cos});
        columns_.push_back({z, shift, Part::Sin});
      }
    }
  }

  std::size_t size() const { return columns_.size(); }

  /// p-th derivative of basis function `col` at x, divided by β^p.
  double normalized_derivative(std::size_t col, int p, double x) const {
    const Column& c = columns_[col];
    const double envelope = std::exp(beta_ * c.unit.real() * (x - c.shift));
    const cplx phase = std::polar(1.0, beta_ * c.unit.imag() * x);
    const cplx v = std::pow(c.unit, p) * phase * envelope;
    switch (c.part) {
      case Part::Cos:
      case Part::Exponential: return v.real();
      case Part::Sin: return v.imag();
    }
    return 0.0;
  }

  double derivative(std::size_t col, int p, double x) const {
    return std::pow(beta_, p) * normalized_derivative(col, p, x);
  }

  double length() const { return length_; }
  double beta() const { return beta_; }

 private:
  enum class Part { Cos, Sin, Exponential };
  struct Column {
    cplx unit;
    double shift;
    Part part;
  };
  double beta_;
  double length_;
  std::vector<Column> columns_;
};

/// Rows are (derivative order p, endpoint) with p = 0..m-1 for Dirichlet and
/// p = m..2m-1 for Neumann; row p is scaled by β^{-p}, which moves no zeros.
inline Matrix boundary_matrix(OperatorOrder m, double lambda, BoundaryKind bc, double length) {
  phlab::detail::require(lambda > 0.0, "boundary_matrix: lambda must be > 0");
  phlab::detail::require(length > 0.0, "boundary_matrix: length must be > 0");
  const int mm = m.value();
  const double beta = std::pow(lambda, 1.0 / (2.0 * mm));
  const RealSolutionBasis basis(m, beta, length);
  const int first = bc == BoundaryKind::Dirichlet ? 0 : mm;
  Matrix M(2 * mm, 2 * mm);
  for (int p = 0; p < mm; ++p) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      M(2 * p, c) = basis.normalized_derivative(c, first + p, 0.0);
      M(2 * p + 1, c) = basis.normalized_derivative(c, first + p, length);
    }
  }
  return M;
}

inline DetIndicator det_indicator(OperatorOrder m, double lambda, BoundaryKind bc, double length) {
  return lu_determinant(boundary_matrix(m, lambda, bc, length));
}

/// Positive eigenvalues, ascending, found by a uniform scan in β = λ^{1/2m}
/// with step 0.02π/L and bisection on each sign change of the determinant.
inline std::vector<double> positive_eigenvalues(OperatorOrder m, BoundaryKind bc, int count,
                                                double length, double tol_root = 1e-12) {
  phlab::detail::require(count >= 0, "positive_eigenvalues: count must be >= 0");
  phlab::detail::require(length > 0.0, "positive_eigenvalues: length must be > 0");
  const int mm = m.value();
  auto sign_at = [&](double beta) {
    return det_indicator(m, std::pow(beta, 2.0 * mm), bc, length).sign;
  };
  auto to_lambda = [&](double beta) { return std::pow(beta, 2.0 * mm); };

  std::vector<double> out;
  const double step = 0.02 * std::numbers::pi / length;
  double prev_beta = step;
  int prev_sign = sign_at(prev_beta);
  for (long i = 2; static_cast<int>(out.size()) < count; ++i) {
    if (i > 1'000'000)
      phlab::detail::fail(ErrorKind::Numerical, "positive_eigenvalues: scan exhausted");
    const double beta = step * static_cast<double>(i);
    const int s = sign_at(beta);
    if (s == 0) {
      out.push_back(to_lambda(beta));
      prev_beta = beta;
      prev_sign = 0;
      continue;
    }
    if (prev_sign != 0 && s != prev_sign) {
      double lo = prev_beta, hi = beta;
      int lo_sign = prev_sign;
      bool converged = false;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol_root * lo || mid == lo || mid == hi) {
          converged = true;
          break;
        }
        const int sm = sign_at(mid);
        if (sm == 0) {
          lo = hi = mid;
          converged = true;
          break;
        }
        if (sm == lo_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (!converged)
        phlab::detail::fail(ErrorKind::Numerical,
                            "positive_eigenvalues: bisection did not converge in 200 steps");
      out.push_back(to_lambda(0.5 * (lo + hi)));
    }
    prev_beta = beta;
    prev_sign = s;
  }
  return out;
}

/// First `count` eigenvalues on (0, L). Neumann spectra start with the m
/// zero modes spanned by 1, x, ..., x^{m-1}.
inline Spectrum solve_1d_spectrum(OperatorOrder m, BoundaryKind bc, int count, double length,
                                  const ToleranceConfig& tol = {}) {
  phlab::detail::require(count >= 1, "solve_1d_spectrum: count must be >= 1");
  std::vector<double> values;
  int positives = count;
  if (bc == BoundaryKind::Neumann) {
    const int zeros = std::min(count, m.value());
    values.assign(zeros, 0.0);
    positives = count - zeros;
  }
  // The zero-mode invariant needs one positive value after the zeros.
  const int computed = (bc == BoundaryKind::Neumann && positives == 0) ? 1 : positives;
  auto roots = positive_eigenvalues(m, bc, computed, length, tol.tol_root);
  roots.resize(positives);
  values.insert(values.end(), roots.begin(), roots.end());
  return Spectrum(m, bc, Domain::interval(length), values, Exact1D{}, values.size(), tol.tol_zero);
}

/// Positive Dirichlet and Neumann eigenvalues coincide pairwise (μ_{k+m} = λ_k in 1D).
inline VerificationReport check_root_coincidence(OperatorOrder m, int count, double length, double tol,
                                         const ToleranceConfig& cfg = {}) {
  phlab::detail::require(count >= 1, "check_root_coincidence: count must be >= 1");
  VerificationReport report;
  report.claim_id = "root_coincidence_1d";
  report.echo("m", std::to_string(m.value()));
  report.echo("count", std::to_string(count));
  report.echo("length", std::to_string(length));
  report.echo("tol", std::to_string(tol));
  const auto dir = positive_eigenvalues(m, BoundaryKind::Dirichlet, count, length, cfg.tol_root);
  const auto neu = positive_eigenvalues(m, BoundaryKind::Neumann, count, length, cfg.tol_root);
  for (int k = 0; k < count; ++k) {
    const double rel = std::abs(neu[k] - dir[k]) / dir[k];
    report.add(k + 1, neu[k], dir[k], tol - rel, rel <= tol);
  }
  report.note = "1D: positive Neumann roots equal positive Dirichlet roots, so mu_{k+m} = lambda_k";
  return report;
}

}  // namespace phlab::oned
