#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "phlab/error.hpp"

namespace phlab {

inline constexpr int kMaxQuadratureNodes = 256;
inline constexpr int kMaxLegendreDerivative = 6;

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2 * order - 1.
struct QuadratureRule {
  std::vector<double> nodes;  // strictly increasing, symmetric about 0
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  auto integrate(F&& f) const {
    decltype(f(0.0)) s{};
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(nodes[q]);
    return s;
  }
};

inline QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > kMaxQuadratureNodes)
    detail::fail(ErrorKind::Capability, "gauss_legendre: n=" + std::to_string(n) +
                                            " outside supported range 1..=" +
                                            std::to_string(kMaxQuadratureNodes));
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  // Newton iteration on P_n, one root per positive half; the other half is mirrored.
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 1; j < n; ++j) {
        const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    // Final derivative evaluated at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 1; j < n; ++j) {
      const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - k] = x;
    rule.nodes[k] = -x;
    rule.weights[n - 1 - k] = w;
    rule.weights[k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// P_0..P_{count-1} and their derivatives up to max_deriv at t.
/// table[i][r] = d^r/dt^r P_i(t).
inline std::vector<std::vector<double>> legendre_table(int count, double t, int max_deriv) {
  detail::require(count >= 1, "legendre_table: count must be >= 1");
  detail::require(max_deriv >= 0 && max_deriv <= kMaxLegendreDerivative,
                  "legendre_table: max_deriv outside 0..=6");
  detail::require(std::abs(t) <= 1.0, "legendre_table: |t| must be <= 1");
  std::vector<std::vector<double>> p(count, std::vector<double>(max_deriv + 1, 0.0));
  p[0][0] = 1.0;
  if (count > 1) {
    p[1][0] = t;
    if (max_deriv >= 1) p[1][1] = 1.0;
  }
  // (k+1) P_{k+1}^{(r)} = (2k+1) (t P_k^{(r)} + r P_k^{(r-1)}) - k P_{k-1}^{(r)}
  for (int k = 1; k + 1 < count; ++k) {
    for (int r = 0; r <= max_deriv; ++r) {
      const double lower = r > 0 ? r * p[k][r - 1] : 0.0;
      p[k + 1][r] = ((2.0 * k + 1.0) * (t * p[k][r] + lower) - k * p[k - 1][r]) / (k + 1.0);
    }
  }
  return p;
}

/// (P_i(t), P_i'(t), ..., P_i^{(max_deriv)}(t)).
inline std::vector<double> legendre_eval(int i, double t, int max_deriv) {
  detail::require(i >= 0, "legendre_eval: degree must be >= 0");
  return legendre_table(i + 1, t, max_deriv)[i];
}

}  // namespace phlab
