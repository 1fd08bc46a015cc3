#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "phlab/quadrature.hpp"

namespace phlab {

/// Bivariate polynomial Σ c(i, j) x^i y^j with dense coefficient storage.
class Poly2 {
 public:
  Poly2() : Poly2(0, 0) {}
  Poly2(int deg_x, int deg_y) : dx_(deg_x), dy_(deg_y), c_((deg_x + 1) * (deg_y + 1), 0.0) {}

  static Poly2 constant(double v) {
    Poly2 p(0, 0);
    p.coef(0, 0) = v;
    return p;
  }
  /// (1 - x^2)(1 - y^2)
  static Poly2 bubble() {
    Poly2 p(2, 2);
    p.coef(0, 0) = 1.0;
    p.coef(2, 0) = -1.0;
    p.coef(0, 2) = -1.0;
    p.coef(2, 2) = 1.0;
    return p;
  }

  int deg_x() const { return dx_; }
  int deg_y() const { return dy_; }
  double& coef(int i, int j) { return c_[i * (dy_ + 1) + j]; }
  double coef(int i, int j) const { return c_[i * (dy_ + 1) + j]; }

  double operator()(double x, double y) const {
    double s = 0.0;
    for (int i = dx_; i >= 0; --i) {
      double row = 0.0;
      for (int j = dy_; j >= 0; --j) row = row * y + coef(i, j);
      s = s * x + row;
    }
    return s;
  }

  /// ∂_x^a ∂_y^b
  Poly2 derivative(int a, int b) const {
    Poly2 out(std::max(0, dx_ - a), std::max(0, dy_ - b));
    for (int i = a; i <= dx_; ++i)
      for (int j = b; j <= dy_; ++j) {
        double f = coef(i, j);
        for (int q = 0; q < a; ++q) f *= i - q;
        for (int q = 0; q < b; ++q) f *= j - q;
        out.coef(i - a, j - b) += f;
      }
    return out;
  }

  Poly2 laplacian() const { return derivative(2, 0) + derivative(0, 2); }

  friend Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 out(std::max(a.dx_, b.dx_), std::max(a.dy_, b.dy_));
    for (int i = 0; i <= a.dx_; ++i)
      for (int j = 0; j <= a.dy_; ++j) out.coef(i, j) += a.coef(i, j);
    for (int i = 0; i <= b.dx_; ++i)
      for (int j = 0; j <= b.dy_; ++j) out.coef(i, j) += b.coef(i, j);
    return out;
  }

  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 out(a.dx_ + b.dx_, a.dy_ + b.dy_);
    for (int i = 0; i <= a.dx_; ++i)
      for (int j = 0; j <= a.dy_; ++j) {
        if (a.coef(i, j) == 0.0) continue;
        for (int k = 0; k <= b.dx_; ++k)
          for (int l = 0; l <= b.dy_; ++l) out.coef(i + k, j + l) += a.coef(i, j) * b.coef(k, l);
      }
    return out;
  }

  Poly2 pow(int e) const {
    Poly2 out = constant(1.0);
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
  }

 private:
  int dx_, dy_;
  std::vector<double> c_;
};

/// ∫_{[-1,1]^2} p q with a Gauss rule exact for the product degree.
inline double integrate_product(const Poly2& p, const Poly2& q) {
  const int deg = std::max(p.deg_x() + q.deg_x(), p.deg_y() + q.deg_y());
  const auto rule = gauss_legendre(deg / 2 + 1);
  double s = 0.0;
  for (std::size_t a = 0; a < rule.size(); ++a)
    for (std::size_t b = 0; b < rule.size(); ++b) {
      const double x = rule.nodes[a], y = rule.nodes[b];
      s += rule.weights[a] * rule.weights[b] * p(x, y) * q(x, y);
    }
  return s;
}

inline double binomial_coefficient(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// ∫ |D^j u|^2 = Σ_a C(j, a) ∫ (∂_x^a ∂_y^{j-a} u)^2 on the reference square.
inline double dj_energy(const Poly2& u, int j) {
  double s = 0.0;
  for (int a = 0; a <= j; ++a) {
    const Poly2 d = u.derivative(a, j - a);
    s += binomial_coefficient(j, a) * integrate_product(d, d);
  }
  return s;
}

/// ∫ |Δ^{j/2} u|^2 for even j, ∫ |∇Δ^{(j-1)/2} u|^2 for odd j.
inline double laplacian_power_energy(const Poly2& u, int j) {
  Poly2 w = u;
  for (int i = 0; i < j / 2; ++i) w = w.laplacian();
  if (j % 2 == 0) return integrate_product(w, w);
  const Poly2 wx = w.derivative(1, 0), wy = w.derivative(0, 1);
  return integrate_product(wx, wx) + integrate_product(wy, wy);
}

}  // namespace phlab
