#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "phlab/trial_space.hpp"

using namespace phlab;
using trial::cplx;

namespace {

trial::TrialSpace random_space(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.5, 3.0);
  std::vector<cplx> alpha;
  for (int j = 0; j < m; ++j) alpha.emplace_back(u(rng), u(rng));
  const double r = pos(rng), th = 2 * std::numbers::pi * u(rng);
  return trial::TrialSpace(OperatorOrder(m), {r * std::cos(th), r * std::sin(th)}, alpha);
}

// (-Δ)^m v = (-1)^m Σ_a C(m, a) ∂_x^{2a} ∂_y^{2(m-a)} v, evaluated term by term.
cplx polyharmonic_by_expansion(const trial::TrialSpace& ts, const trial::Point& x) {
  const int m = ts.m();
  cplx s = 0.0;
  for (std::size_t j = 0; j < ts.xi().size(); ++j) {
    const cplx ik = cplx(0, 1) * ts.xi()[j];
    const cplx e = ts.alpha()[j] * std::exp(ik * (ts.omega()[0] * x[0] + ts.omega()[1] * x[1]));
    for (int a = 0; a <= m; ++a)
      s += galerkin::binomial(m, a) * std::pow(ik * ts.omega()[0], 2 * a) *
           std::pow(ik * ts.omega()[1], 2 * (m - a)) * e;
  }
  return std::pow(-1.0, m) * s;
}

}  // namespace

TEST(RootsOfUnity, Basic) {
  for (int m = 1; m <= 12; ++m) {
    const auto r = trial::roots_of_unity(m);
    ASSERT_EQ(r.size(), static_cast<std::size_t>(m));
    for (auto z : r) EXPECT_NEAR(std::abs(std::pow(z, m) - 1.0), 0.0, 1e-13);
  }
  EXPECT_THROW(trial::roots_of_unity(0), Error);
}

TEST(Vandermonde, Values) {
  EXPECT_NEAR(trial::vandermonde_check(trial::roots_of_unity(2)), 2.0, 1e-14);
  EXPECT_NEAR(trial::vandermonde_check(trial::roots_of_unity(4)), 16.0, 1e-13);
  // |disc(x^m - 1)| = m^m, so |V| = m^{m/2}.
  for (int m = 1; m <= 12; ++m) {
    const double v = trial::vandermonde_check(trial::roots_of_unity(m));
    EXPECT_GT(v, 0.0);
    EXPECT_NEAR(v, std::pow(m, m / 2.0), 1e-11 * std::pow(m, m / 2.0)) << m;
  }
  const std::vector<cplx> repeated{1.0, 1.0};
  EXPECT_EQ(trial::vandermonde_check(repeated), 0.0);
}

TEST(TrialSpace, PointwiseIdentities) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int m = 1; m <= 3; ++m) {
    const auto ts = random_space(m, rng);
    std::vector<trial::Point> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({unit(rng), unit(rng)});
    EXPECT_LE(trial::verify_pde_identity(ts, pts), 1e-12) << m;
    EXPECT_LE(trial::verify_mth_gradient_identity(ts, pts), 1e-12) << m;
    for (const auto& p : pts) {
      const auto e = ts.eval(p);
      const cplx indep = polyharmonic_by_expansion(ts, p);
      EXPECT_LE(std::abs(indep - ts.eigenvalue() * e.value), 1e-11 * ts.eigenvalue() * (1 + std::abs(e.value)));
      EXPECT_NEAR(trial::mth_gradient_sq(e), trial::mth_gradient_sq_grouped(ts, p),
                  1e-12 * (1 + trial::mth_gradient_sq(e)));
    }
  }
}

TEST(TrialSpace, LaplacianByFiniteDifferences) {
  const trial::TrialSpace ts(OperatorOrder(1), {1.3, -0.4}, {cplx(0.7, 0.2)});
  const trial::Point x{0.3, 0.6};
  const double h = 1e-4;
  auto v = [&](double a, double b) { return ts.eval({a, b}).value; };
  const cplx lap = (v(x[0] + h, x[1]) + v(x[0] - h, x[1]) + v(x[0], x[1] + h) + v(x[0], x[1] - h) - 4.0 * v(x[0], x[1])) /
                   (h * h);
  EXPECT_NEAR(std::abs(-lap - ts.eigenvalue() * v(x[0], x[1])), 0.0, 1e-5);
}

TEST(TrialSpace, DegenerateCases) {
  const std::vector<trial::Point> pts{{0.1, 0.2}, {0.5, 0.5}};
  const trial::TrialSpace zero(OperatorOrder(2), {1.0, 1.0}, {0.0, 0.0});
  EXPECT_EQ(trial::verify_pde_identity(zero, pts), 0.0);
  EXPECT_EQ(trial::verify_mth_gradient_identity(zero, pts), 0.0);
  const trial::TrialSpace single(OperatorOrder(1), {2.0, 0.5}, {1.0});
  EXPECT_LE(trial::verify_pde_identity(single, pts), 1e-15);
  EXPECT_THROW(trial::TrialSpace(OperatorOrder(1), {0.0, 0.0}, {1.0}), Error);
  EXPECT_THROW(trial::TrialSpace(OperatorOrder(2), {1.0, 0.0}, {1.0}), Error);
}

TEST(Realify, DoublesTheSpectrum) {
  trial::CMatrix h(2);
  h(0, 0) = 2.0;
  h(1, 1) = 3.0;
  h(0, 1) = cplx(0.0, 1.0);
  h(1, 0) = cplx(0.0, -1.0);
  const auto e = symmetric_eig(trial::realify(h));
  // Eigenvalues of [[2, i], [-i, 3]] are (5 ± √5)/2, each twice.
  const double lo = (5 - std::sqrt(5.0)) / 2, hi = (5 + std::sqrt(5.0)) / 2;
  EXPECT_NEAR(e.values[0], lo, 1e-14);
  EXPECT_NEAR(e.values[1], lo, 1e-14);
  EXPECT_NEAR(e.values[2], hi, 1e-14);
  EXPECT_NEAR(e.values[3], hi, 1e-14);
}

TEST(ChainCertificate, LaplacianAndPlate) {
  for (int m = 1; m <= 2; ++m) {
    const int n = m == 1 ? 10 : 12;
    const auto sol = galerkin::solve_2d(OperatorOrder(m), BoundaryKind::Dirichlet, n, {1, 1}, 4);
    for (int k = 1; k <= 4; ++k) {
      const double lam = sol.spectrum.at(k);
      const auto omega = trial::select_omega(sol, k, lam);
      EXPECT_NEAR(std::pow(trial::norm2(omega), m), lam, 1e-12 * lam);
      const auto cert = trial::certified_chain_bound(sol, k, omega);
      EXPECT_TRUE(cert.certified) << "m=" << m << " k=" << k << " max=" << cert.max_rayleigh << " lam=" << lam;
      EXPECT_LE(cert.max_rayleigh, lam * (1 + 1e-8));
      EXPECT_GT(cert.gram_min_sv, 1e-8);
      EXPECT_EQ(cert.dimension, k + m);
      EXPECT_LT(cert.quadrature_change, 1e-10);
    }
  }
}

TEST(ChainCertificate, RejectsMismatchedOmega) {
  const auto sol = galerkin::solve_2d(OperatorOrder(1), BoundaryKind::Dirichlet, 8, {1, 1}, 2);
  EXPECT_THROW(trial::certified_chain_bound(sol, 1, {1.0, 0.0}), Error);
  const auto neu = galerkin::solve_2d(OperatorOrder(1), BoundaryKind::Neumann, 8, {1, 1}, 2);
  EXPECT_THROW(trial::certified_chain_bound(neu, 1, {1.0, 0.0}), Error);
}

TEST(ChainCertificate, TooLargeOmegaExceedsBound) {
  // A plane wave with |ω|^2 well above λ̂_1 pushes the maximum Rayleigh quotient past λ̂_1.
  const auto sol = galerkin::solve_2d(OperatorOrder(1), BoundaryKind::Dirichlet, 8, {1, 1}, 2);
  const trial::Vec2 omega{10.0, 3.0};
  const auto forms = trial::chain_forms(sol, 1, omega, trial::chain_quadrature_nodes(8, 1, omega, {1, 1}));
  EXPECT_GT(trial::max_generalized(forms), sol.spectrum.at(1) * 2);
}

TEST(Hm0Distance, PlaneWavesStayAway) {
  for (int m = 1; m <= 2; ++m) {
    const auto sol = galerkin::solve_2d(OperatorOrder(m), BoundaryKind::Dirichlet, 10, {1, 1}, 1);
    const auto omega = trial::select_omega(sol, 1, sol.spectrum.at(1));
    const double d = trial::hm0_distance(sol, omega);
    EXPECT_GE(d, 0.01);
    EXPECT_LE(d, 1.0 + 1e-12);
  }
}
