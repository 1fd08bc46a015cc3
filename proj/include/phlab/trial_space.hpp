#pragma once

// Plane-wave trial space V_ω = span{ e^{i ξ_j ω·x} : ξ_j^m = 1 } and the
// Rayleigh-quotient certificate on W = U ⊕ V_ω, where U is spanned by the
// first k discrete Dirichlet eigenfunctions.
//
// Every v in V_ω satisfies (-Δ)^m v = |ω|^{2m} v and |D^m v|^2 = |ω|^{2m}|v|^2
// pointwise. Because U ⊂ H^m_0, m integrations by parts turn the cross term
// ∫ D^m u · D^m v̄ into |ω|^{2m} ∫ u v̄, so the Rayleigh quotient on W is
// bounded by λ̂_k once |ω|^{2m} = λ̂_k.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "phlab/core.hpp"
#include "phlab/galerkin.hpp"
#include "phlab/linalg.hpp"
#include "phlab/quadrature.hpp"

namespace phlab::trial {

using cplx = std::complex<double>;
using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

/// The m distinct m-th roots of unity e^{2πij/m}, j = 0..m-1.
inline std::vector<cplx> roots_of_unity(int m) {
  detail::require(m >= 1, "roots_of_unity: m must be >= 1");
  std::vector<cplx> out;
  for (int j = 0; j < m; ++j) {
    if (j == 0) {
      out.emplace_back(1.0, 0.0);
      continue;
    }
    // exact values on the axes
    if (4 * j == m) out.emplace_back(0.0, 1.0);
    else if (2 * j == m) out.emplace_back(-1.0, 0.0);
    else if (4 * j == 3 * m) out.emplace_back(0.0, -1.0);
    else out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / m));
  }
  return out;
}

/// |Π_{i<j} (ζ_j - ζ_i)|, the modulus of the Vandermonde determinant.
inline double vandermonde_check(std::span<const cplx> zetas) {
  detail::require(!zetas.empty(), "vandermonde_check: need at least one node");
  double prod = 1.0;
  for (std::size_t i = 0; i < zetas.size(); ++i)
    for (std::size_t j = i + 1; j < zetas.size(); ++j) prod *= std::abs(zetas[j] - zetas[i]);
  return prod;
}

inline double norm2(const Vec2& w) { return w[0] * w[0] + w[1] * w[1]; }

struct TrialEval {
  cplx value;
  std::vector<cplx> partials;  // all 2^m ordered tuples; bit r of the index selects ∂_y for slot r
  cplx polyharmonic;           // (-Δ)^m v
};

/// v = Σ_j α_j e^{i ξ_j ω·x} with closed-form derivatives.
class TrialSpace {
 public:
  TrialSpace(OperatorOrder m, Vec2 omega, std::vector<cplx> alpha)
      : m_(m), omega_(omega), xi_(roots_of_unity(m.value())), alpha_(std::move(alpha)) {
    detail::require(norm2(omega_) > 0.0, "TrialSpace: omega must be non-zero");
    detail::require(alpha_.size() == xi_.size(), "TrialSpace: need one coefficient per root");
  }

  int m() const { return m_.value(); }
  const Vec2& omega() const { return omega_; }
  const std::vector<cplx>& xi() const { return xi_; }
  const std::vector<cplx>& alpha() const { return alpha_; }
  /// |ω|^{2m}
  double eigenvalue() const { return std::pow(norm2(omega_), m()); }

  TrialEval eval(const Point& x) const {
    const int m = this->m();
    const std::size_t tuples = std::size_t{1} << m;
    TrialEval out{0.0, std::vector<cplx>(tuples, 0.0), 0.0};
    const double w2 = norm2(omega_);
    for (std::size_t j = 0; j < xi_.size(); ++j) {
      const cplx ik = cplx(0.0, 1.0) * xi_[j];
      const cplx e = alpha_[j] * std::exp(ik * (omega_[0] * x[0] + omega_[1] * x[1]));
      out.value += e;
      for (std::size_t t = 0; t < tuples; ++t) {
        cplx f = e;
        for (int r = 0; r < m; ++r) f *= ik * omega_[(t >> r) & 1u];
        out.partials[t] += f;
      }
      // -Δ e^{iξω·x} = ξ^2 |ω|^2 e^{iξω·x}
      out.polyharmonic += std::pow(xi_[j] * xi_[j] * w2, m) * e;
    }
    return out;
  }

  /// ∂_x^a ∂_y^{m-a} v at x, the grouped representative of C(m, a) ordered tuples.
  cplx mixed_partial(int a, const Point& x) const {
    cplx s = 0.0;
    for (std::size_t j = 0; j < xi_.size(); ++j) {
      const cplx ik = cplx(0.0, 1.0) * xi_[j];
      s += alpha_[j] * std::pow(ik * omega_[0], a) * std::pow(ik * omega_[1], m() - a) *
           std::exp(ik * (omega_[0] * x[0] + omega_[1] * x[1]));
    }
    return s;
  }

 private:
  OperatorOrder m_;
  Vec2 omega_;
  std::vector<cplx> xi_;
  std::vector<cplx> alpha_;
};

inline TrialEval trial_eval(const TrialSpace& ts, const Point& x) { return ts.eval(x); }

/// max |(-Δ)^m v - |ω|^{2m} v| / (|ω|^{2m} max|v|) over the points.
inline double verify_pde_identity(const TrialSpace& ts, std::span<const Point> points) {
  detail::require(!points.empty(), "verify_pde_identity: need at least one point");
  const double lam = ts.eigenvalue();
  double worst = 0.0, vmax = 0.0;
  for (const auto& p : points) {
    const auto e = ts.eval(p);
    worst = std::max(worst, std::abs(e.polyharmonic - lam * e.value));
    vmax = std::max(vmax, std::abs(e.value));
  }
  if (vmax == 0.0) return 0.0;
  return worst / (lam * vmax);
}

/// |D^m v|^2 by explicit summation over all d^m ordered index tuples.
inline double mth_gradient_sq(const TrialEval& e) {
  double s = 0.0;
  for (const auto& p : e.partials) s += std::norm(p);
  return s;
}

/// Same quantity grouped as Σ_a C(m,a) |∂_x^a ∂_y^{m-a} v|^2.
inline double mth_gradient_sq_grouped(const TrialSpace& ts, const Point& x) {
  double s = 0.0;
  for (int a = 0; a <= ts.m(); ++a) s += galerkin::binomial(ts.m(), a) * std::norm(ts.mixed_partial(a, x));
  return s;
}

/// max ||D^m v|^2 - |ω|^{2m}|v|^2| / (|ω|^{2m} max|v|^2) over the points.
inline double verify_mth_gradient_identity(const TrialSpace& ts, std::span<const Point> points) {
  detail::require(!points.empty(), "verify_mth_gradient_identity: need at least one point");
  const double lam = ts.eigenvalue();
  double worst = 0.0, vmax = 0.0;
  for (const auto& p : points) {
    const auto e = ts.eval(p);
    worst = std::max(worst, std::abs(mth_gradient_sq(e) - lam * std::norm(e.value)));
    vmax = std::max(vmax, std::norm(e.value));
  }
  if (vmax == 0.0) return 0.0;
  return worst / (lam * vmax);
}

// ---------------------------------------------------------------------------
// Quadrature-level forms on W = U ⊕ V_ω

/// Dense complex matrix, row-major.
class CMatrix {
 public:
  explicit CMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<cplx> data_;
};

/// Hermitian H = X + iY as the real symmetric [[X, -Y], [Y, X]]; its eigenvalues are those of H, doubled.
inline SymMatrix realify(const CMatrix& h) {
  const std::size_t n = h.size();
  SymMatrix r(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      r.set(i, j, v.real());
      r.set(n + i, n + j, v.real());
      r.set(n + i, j, v.imag());
      r.set(n + j, i, -v.imag());
    }
  return r;
}

/// Tensor Gauss grid on [0, lx] x [0, ly].
struct Grid {
  std::vector<double> x, wx, tx;  // physical node, physical weight, reference node
  std::vector<double> y, wy, ty;
  std::size_t points() const { return x.size() * y.size(); }
};

inline Grid make_grid(const Rectangle& rect, int nodes) {
  const auto rule = gauss_legendre(nodes);
  Grid g;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = rule.nodes[q];
    g.tx.push_back(t);
    g.x.push_back(0.5 * rect.lx * (t + 1.0));
    g.wx.push_back(0.5 * rect.lx * rule.weights[q]);
    g.ty.push_back(t);
    g.y.push_back(0.5 * rect.ly * (t + 1.0));
    g.wy.push_back(0.5 * rect.ly * rule.weights[q]);
  }
  return g;
}

/// Value and grouped m-th partials ∂_x^a ∂_y^{m-a} (a = 0..m) of one function on a grid.
struct FieldSamples {
  std::vector<cplx> value;
  std::vector<std::vector<cplx>> partial;
};

/// Basis tables per axis: tab[q][i][r] = d^r φ_i/dt^r at node q.
using AxisTables = std::vector<std::vector<std::vector<double>>>;

inline AxisTables axis_tables(const galerkin::ShapeBasis1D& basis, std::span<const double> nodes) {
  AxisTables t;
  for (double s : nodes) t.push_back(basis.table(s, basis.m()));
  return t;
}

/// Samples of the Galerkin function with flat coefficients c (index i_x * n + i_y).
inline FieldSamples sample_galerkin(const galerkin::ShapeBasis1D& basis, const Rectangle& rect,
                                    const Grid& g, const AxisTables& tx, const AxisTables& ty,
                                    std::span<const double> c) {
  const int n = basis.size();
  const int m = basis.m();
  const double sx = 2.0 / rect.lx, sy = 2.0 / rect.ly;
  const std::size_t nx = g.x.size(), ny = g.y.size();
  FieldSamples f{std::vector<cplx>(nx * ny), std::vector<std::vector<cplx>>(m + 1, std::vector<cplx>(nx * ny))};
  // One contraction per (x-derivative order, y-derivative order) pair that is needed.
  auto contract = [&](int a, int b, double scale, std::vector<cplx>& out) {
    std::vector<double> tmp(nx * n, 0.0);  // tmp[q][i2] = Σ_{i1} c[i1,i2] φ^{(a)}_{i1}(x_q)
    for (std::size_t q = 0; q < nx; ++q)
      for (int i1 = 0; i1 < n; ++i1) {
        const double phi = tx[q][i1][a];
        if (phi == 0.0) continue;
        for (int i2 = 0; i2 < n; ++i2) tmp[q * n + i2] += c[i1 * n + i2] * phi;
      }
    for (std::size_t q = 0; q < nx; ++q)
      for (std::size_t p = 0; p < ny; ++p) {
        double s = 0.0;
        for (int i2 = 0; i2 < n; ++i2) s += tmp[q * n + i2] * ty[p][i2][b];
        out[q * ny + p] = scale * s;
      }
  };
  contract(0, 0, 1.0, f.value);
  for (int a = 0; a <= m; ++a) contract(a, m - a, std::pow(sx, a) * std::pow(sy, m - a), f.partial[a]);
  return f;
}

/// Samples of e^{i ξ ω·x}.
inline FieldSamples sample_plane_wave(int m, cplx xi, const Vec2& omega, const Grid& g) {
  const std::size_t nx = g.x.size(), ny = g.y.size();
  FieldSamples f{std::vector<cplx>(nx * ny), std::vector<std::vector<cplx>>(m + 1, std::vector<cplx>(nx * ny))};
  const cplx ik = cplx(0.0, 1.0) * xi;
  std::vector<cplx> factor(m + 1);
  for (int a = 0; a <= m; ++a) factor[a] = std::pow(ik * omega[0], a) * std::pow(ik * omega[1], m - a);
  for (std::size_t q = 0; q < nx; ++q)
    for (std::size_t p = 0; p < ny; ++p) {
      const cplx e = std::exp(ik * (omega[0] * g.x[q] + omega[1] * g.y[p]));
      f.value[q * ny + p] = e;
      for (int a = 0; a <= m; ++a) f.partial[a][q * ny + p] = factor[a] * e;
    }
  return f;
}

/// Mass ∫ f_p conj(f_q) and stiffness ∫ D^m f_p · conj(D^m f_q) over the grid.
struct HermitianForms {
  CMatrix stiffness;
  CMatrix mass;
};

inline HermitianForms hermitian_forms(int m, const Grid& g, const std::vector<FieldSamples>& fs) {
  const std::size_t n = fs.size();
  const std::size_t ny = g.y.size();
  HermitianForms out{CMatrix(n), CMatrix(n)};
  std::vector<double> w(g.points());
  for (std::size_t q = 0; q < g.x.size(); ++q)
    for (std::size_t p = 0; p < ny; ++p) w[q * ny + p] = g.wx[q] * g.wy[p];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cplx mass = 0.0, stiff = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) mass += w[k] * fs[i].value[k] * std::conj(fs[j].value[k]);
      for (int a = 0; a <= m; ++a) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * fs[i].partial[a][k] * std::conj(fs[j].partial[a][k]);
        stiff += galerkin::binomial(m, a) * s;
      }
      out.mass(i, j) = mass;
      out.mass(j, i) = std::conj(mass);
      out.stiffness(i, j) = stiff;
      out.stiffness(j, i) = std::conj(stiff);
    }
  return out;
}

/// Rescales every function to unit L2 norm, in place.
inline void normalize(HermitianForms& f) {
  const std::size_t n = f.mass.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(f.mass(i, i).real());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      f.mass(i, j) *= s[i] * s[j];
      f.stiffness(i, j) *= s[i] * s[j];
    }
}

/// Smallest eigenvalue (= smallest singular value) of a Hermitian PSD Gram matrix.
inline double gram_min_singular_value(const CMatrix& gram) { return symmetric_eig(realify(gram)).values.front(); }

/// Per-axis node count for oscillatory cross terms: n + 2m + 2 for the
/// polynomial part plus 2⌈|ω| L / π⌉ + 10 to resolve the plane wave.
inline int chain_quadrature_nodes(int n, int m, const Vec2& omega, const Rectangle& rect) {
  const double len = std::max(rect.lx, rect.ly);
  const int osc = static_cast<int>(std::ceil(std::sqrt(norm2(omega)) * len / std::numbers::pi));
  return std::min(kMaxQuadratureNodes, n + 2 * m + 2 + 2 * osc + 10);
}

/// Normalized forms on U ⊕ V_ω: the first k discrete Dirichlet eigenfunctions then the m plane waves.
inline HermitianForms chain_forms(const galerkin::GalerkinSolution& dir, int k, const Vec2& omega, int nodes) {
  const int m = dir.basis.m();
  const Grid g = make_grid(dir.rect, nodes);
  const auto tx = axis_tables(dir.basis, g.tx);
  const auto ty = axis_tables(dir.basis, g.ty);
  std::vector<FieldSamples> fs;
  for (int j = 0; j < k; ++j) {
    const auto c = dir.vectors.column(j);
    fs.push_back(sample_galerkin(dir.basis, dir.rect, g, tx, ty, c));
  }
  for (const cplx xi : roots_of_unity(m)) fs.push_back(sample_plane_wave(m, xi, omega, g));
  auto forms = hermitian_forms(m, g, fs);
  normalize(forms);
  return forms;
}

/// ω = λ̂^{1/2m} (cos θ, sin θ) for the first golden-angle θ at which U ∪ V_ω has a
/// well-conditioned Gram matrix (smallest singular value > tol).
inline Vec2 select_omega(const galerkin::GalerkinSolution& dir, int k, double lambda_hat, double tol = 1e-8) {
  detail::require(lambda_hat > 0.0, "select_omega: lambda_hat must be > 0");
  detail::require(k >= 0 && static_cast<std::size_t>(k) <= dir.vectors.cols(),
                  "select_omega: k exceeds the available eigenfunctions");
  const int m = dir.basis.m();
  const double radius = std::pow(lambda_hat, 1.0 / (2.0 * m));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int t = 0; t < 64; ++t) {
    const double theta = std::fmod((t + 1) * golden, 2.0 * std::numbers::pi);
    const Vec2 omega{radius * std::cos(theta), radius * std::sin(theta)};
    const int nodes = chain_quadrature_nodes(dir.n(), m, omega, dir.rect);
    const auto forms = chain_forms(dir, k, omega, nodes);
    if (gram_min_singular_value(forms.mass) > tol) return omega;
  }
  detail::fail(ErrorKind::Numerical, "select_omega: 64 golden-angle directions all gave a degenerate Gram matrix");
}

struct ChainCertificate {
  int k = 0;
  double lambda_hat = 0.0;
  Vec2 omega{};
  double max_rayleigh = 0.0;
  double gram_min_sv = 0.0;
  int dimension = 0;               // dim W = k + m
  double quadrature_change = 0.0;  // relative change of max_rayleigh when nodes are doubled
  bool certified = false;
};

inline double max_generalized(const HermitianForms& f) {
  return generalized_sym_eig(realify(f.stiffness), realify(f.mass)).values.back();
}

/// Largest Rayleigh quotient on W = span(u_1..u_k) ⊕ V_ω; certified when it does not
/// exceed λ̂_k (1 + tol) and W has full dimension k + m.
inline ChainCertificate certified_chain_bound(const galerkin::GalerkinSolution& dir, int k, const Vec2& omega,
                                              int quad_nodes = 0, double tol = 1e-9) {
  detail::require(dir.spectrum.bc() == BoundaryKind::Dirichlet, "certified_chain_bound: need a Dirichlet solution");
  detail::require(k >= 1 && static_cast<std::size_t>(k) <= dir.vectors.cols(),
                  "certified_chain_bound: k exceeds the available eigenfunctions");
  const int m = dir.basis.m();
  ChainCertificate cert;
  cert.k = k;
  cert.lambda_hat = dir.spectrum.at(k);
  cert.omega = omega;
  const double wave = std::pow(norm2(omega), m);
  detail::require(std::abs(wave - cert.lambda_hat) <= 1e-12 * cert.lambda_hat,
                  "certified_chain_bound: |omega|^{2m} must equal lambda_hat_k");
  const int nodes = quad_nodes > 0 ? quad_nodes : chain_quadrature_nodes(dir.n(), m, omega, dir.rect);

  const auto forms = chain_forms(dir, k, omega, nodes);
  cert.gram_min_sv = gram_min_singular_value(forms.mass);
  cert.dimension = k + m;
  if (!(cert.gram_min_sv > 1e-8))
    detail::fail(ErrorKind::Numerical, "certified_chain_bound: Gram matrix of U + V_omega is degenerate (min sv " +
                                           std::to_string(cert.gram_min_sv) + "); reselect omega");
  cert.max_rayleigh = max_generalized(forms);
  const double refined = max_generalized(chain_forms(dir, k, omega, std::min(kMaxQuadratureNodes, 2 * nodes)));
  cert.quadrature_change = std::abs(refined - cert.max_rayleigh) / std::abs(cert.max_rayleigh);
  cert.certified = cert.max_rayleigh <= cert.lambda_hat * (1.0 + tol);
  return cert;
}

/// Smallest relative H^m distance from V_ω to the discrete Dirichlet space:
/// min over v ∈ V_ω of ‖v - Pv‖_{H^m} / ‖v‖_{H^m}, P the H^m-orthogonal projection.
inline double hm0_distance(const galerkin::GalerkinSolution& dir, const Vec2& omega) {
  const int m = dir.basis.m();
  const int n = dir.n();
  const auto pencil = galerkin::assemble(OperatorOrder(m), BoundaryKind::Dirichlet, n, dir.rect);
  SymMatrix gram(pencil.stiffness.size());
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) gram.set(i, j, pencil.stiffness(i, j) + pencil.mass(i, j));
  const auto L = cholesky_spd(gram);

  const int nodes = chain_quadrature_nodes(n, m, omega, dir.rect);
  const Grid g = make_grid(dir.rect, nodes);
  const auto tx = axis_tables(dir.basis, g.tx);
  const auto ty = axis_tables(dir.basis, g.ty);
  const double sx = 2.0 / dir.rect.lx, sy = 2.0 / dir.rect.ly;
  const auto xis = roots_of_unity(m);
  const std::size_t nv = xis.size(), nb = gram.size(), nx = g.x.size(), ny = g.y.size();

  std::vector<FieldSamples> waves;
  for (const cplx xi : xis) waves.push_back(sample_plane_wave(m, xi, omega, g));

  // b[j][i] = <v_j, φ_i>_{H^m}; the basis is a tensor product so contract axis by axis.
  std::vector<std::vector<cplx>> b(nv, std::vector<cplx>(nb, 0.0));
  for (std::size_t j = 0; j < nv; ++j) {
    auto add_term = [&](const std::vector<cplx>& field, int a, int bdeg, double coef) {
      std::vector<cplx> tmp(nx * n, 0.0);  // tmp[q][i2] = Σ_p w_p conj(field(q,p)) ψ^{(b)}_{i2}(y_p)
      for (std::size_t q = 0; q < nx; ++q)
        for (std::size_t p = 0; p < ny; ++p) {
          const cplx f = g.wy[p] * std::conj(field[q * ny + p]);
          for (int i2 = 0; i2 < n; ++i2) tmp[q * n + i2] += f * ty[p][i2][bdeg];
        }
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          cplx s = 0.0;
          for (std::size_t q = 0; q < nx; ++q) s += g.wx[q] * tx[q][i1][a] * tmp[q * n + i2];
          b[j][i1 * n + i2] += coef * s;
        }
    };
    add_term(waves[j].value, 0, 0, 1.0);
    for (int a = 0; a <= m; ++a)
      add_term(waves[j].partial[a], a, m - a, galerkin::binomial(m, a) * std::pow(sx, a) * std::pow(sy, m - a));
  }

  // Forms on V_ω: full H^m Gram and the projected part b^H K^{-1} b.
  auto vv = hermitian_forms(m, g, waves);
  CMatrix full(nv), residual(nv);
  std::vector<std::vector<cplx>> z(nv, std::vector<cplx>(nb));  // z = L^{-1} b (conjugated rows)
  for (std::size_t j = 0; j < nv; ++j)
    for (std::size_t i = 0; i < nb; ++i) {
      cplx s = std::conj(b[j][i]);
      for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * z[j][k];
      z[j][i] = s / L(i, i);
    }
  for (std::size_t p = 0; p < nv; ++p)
    for (std::size_t q = 0; q < nv; ++q) {
      cplx proj = 0.0;
      for (std::size_t i = 0; i < nb; ++i) proj += z[p][i] * std::conj(z[q][i]);
      full(p, q) = vv.stiffness(p, q) + vv.mass(p, q);
      residual(p, q) = full(p, q) - proj;
    }
  const auto eig = generalized_sym_eig(realify(residual), realify(full));
  return std::sqrt(std::max(0.0, eig.values.front()));
}

}  // namespace phlab::trial
