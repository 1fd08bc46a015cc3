#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phlab/error.hpp"

namespace phlab {

inline constexpr int kMaxOrder = 3;

/// Order m of the polyharmonic operator (-Δ)^m.
class OperatorOrder {
 public:
  explicit OperatorOrder(int m) : m_(m) {
    if (m < 1 || m > kMaxOrder)
      detail::fail(ErrorKind::Capability, "operator order m=" + std::to_string(m) +
                                              " outside supported range 1..=" +
                                              std::to_string(kMaxOrder));
  }
  int value() const noexcept { return m_; }
  operator int() const noexcept { return m_; }

 private:
  int m_;
};

enum class BoundaryKind { Dirichlet, Neumann };

inline const char* to_string(BoundaryKind bc) {
  return bc == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

struct Interval {
  double length = 1.0;
};

struct Rectangle {
  double lx = 1.0;
  double ly = 1.0;
};

class Domain {
 public:
  static Domain interval(double length) {
    check_length(length, "interval length");
    return Domain(Interval{length});
  }
  static Domain rectangle(double lx, double ly) {
    check_length(lx, "rectangle lx");
    check_length(ly, "rectangle ly");
    return Domain(Rectangle{lx, ly});
  }
  static Domain unit_square() { return rectangle(1.0, 1.0); }

  int dimension() const { return is_interval() ? 1 : 2; }
  bool is_interval() const { return std::holds_alternative<Interval>(shape_); }
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  const Interval& as_interval() const { return std::get<Interval>(shape_); }
  const Rectangle& as_rectangle() const { return std::get<Rectangle>(shape_); }

  // Side lengths in the (lx, ly) convention; ly is 0 for an interval.
  double lx() const { return is_interval() ? as_interval().length : as_rectangle().lx; }
  double ly() const { return is_interval() ? 0.0 : as_rectangle().ly; }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.dimension() == b.dimension() && a.lx() == b.lx() && a.ly() == b.ly();
  }

 private:
  explicit Domain(std::variant<Interval, Rectangle> s) : shape_(s) {}
  static void check_length(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      detail::fail(ErrorKind::InvalidArgument,
                   std::string(what) + " must be strictly positive and finite");
  }
  std::variant<Interval, Rectangle> shape_;
};

/// Number of monomials in d variables of total degree <= m-1, i.e. C(d+m-1, d).
inline int n_poly_dim(int d, int m) {
  detail::require(d >= 1, "n_poly_dim: d must be >= 1");
  detail::require(m >= 1, "n_poly_dim: m must be >= 1");
  // C(d+m-1, d) computed incrementally; exact in integers for the small sizes used here.
  long long c = 1;
  for (int i = 1; i <= d; ++i) c = c * (m - 1 + i) / i;
  return static_cast<int>(c);
}

struct ToleranceConfig {
  double tol_zero = 1e-6;
  double tol_root = 1e-12;
  double tol_identity = 1e-9;
  double margin_factor = 5.0;

  void validate() const {
    auto positive = [](double v, const char* key) {
      if (!(v > 0.0) || !std::isfinite(v))
        detail::fail(ErrorKind::Usage, std::string(key) + " must be strictly positive");
    };
    positive(tol_zero, "tol_zero");
    positive(tol_root, "tol_root");
    positive(tol_identity, "tol_identity");
    positive(margin_factor, "margin_factor");
  }
};

struct Exact1D {};
struct Galerkin2D {
  int n_per_axis = 0;
};
using SpectrumMethod = std::variant<Exact1D, Galerkin2D>;

/// Ordered eigenvalue list with the configuration that produced it.
///
/// Construction clamps values within tol_zero of zero (relative to the first
/// positive eigenvalue) to exactly 0 and enforces the zero-mode count for
/// Neumann spectra: n(d, m) zeros followed by a strictly positive value.
class Spectrum {
 public:
  Spectrum(OperatorOrder m, BoundaryKind bc, Domain domain, std::vector<double> values,
           SpectrumMethod method, std::size_t trusted_count, double tol_zero = 1e-6)
      : m_(m), bc_(bc), domain_(domain), values_(std::move(values)), method_(method),
        trusted_count_(trusted_count) {
    std::sort(values_.begin(), values_.end());
    detail::require(trusted_count_ <= values_.size(),
                    "Spectrum: trusted_count exceeds number of values");
    const std::size_t expected_zeros =
        bc_ == BoundaryKind::Neumann
            ? static_cast<std::size_t>(n_poly_dim(domain_.dimension(), m_.value()))
            : 0;
    if (values_.empty()) return;

    const std::size_t ref_index = std::min(expected_zeros, values_.size() - 1);
    const double ref = std::abs(values_[ref_index]);
    const double cutoff = tol_zero * ref;
    for (double& v : values_) {
      if (std::abs(v) <= cutoff) v = 0.0;
      if (v < 0.0)
        detail::fail(ErrorKind::Numerical,
                     "Spectrum: negative eigenvalue " + std::to_string(v) +
                         " beyond zero tolerance");
    }
    const auto zeros = static_cast<std::size_t>(
        std::count(values_.begin(), values_.end(), 0.0));
    const std::size_t needed = std::min(expected_zeros, values_.size());
    if (zeros != needed)
      detail::fail(ErrorKind::Numerical,
                   std::string("Spectrum: ") + to_string(bc_) + " spectrum has " +
                       std::to_string(zeros) + " zero modes, expected " +
                       std::to_string(needed));
  }

  int m() const { return m_.value(); }
  BoundaryKind bc() const { return bc_; }
  const Domain& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  const SpectrumMethod& method() const { return method_; }
  std::size_t trusted_count() const { return trusted_count_; }
  std::size_t size() const { return values_.size(); }
  /// 1-based access, matching the usual eigenvalue indexing.
  double at(std::size_t k) const { return values_.at(k - 1); }

  bool is_galerkin() const { return std::holds_alternative<Galerkin2D>(method_); }
  int n_per_axis() const { return is_galerkin() ? std::get<Galerkin2D>(method_).n_per_axis : 0; }

 private:
  OperatorOrder m_;
  BoundaryKind bc_;
  Domain domain_;
  std::vector<double> values_;
  SpectrumMethod method_;
  std::size_t trusted_count_;
};

/// One compared pair in a verification claim.
struct ClaimRecord {
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // >= 0 when the record satisfies its rule
  bool ok = true;
};

struct VerificationReport {
  std::string claim_id;
  bool passed = true;
  bool informational = false;  // report-only claims never fail a suite
  double margin = std::numeric_limits<double>::infinity();
  std::vector<ClaimRecord> details;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::string note;

  void add(ClaimRecord r) {
    margin = std::min(margin, r.slack);
    passed = passed && r.ok;
    details.push_back(r);
  }
  void add(int k, double lhs, double rhs, double slack, bool ok) {
    add(ClaimRecord{k, lhs, rhs, slack, ok});
  }
  void echo(std::string key, std::string value) {
    config_echo.emplace_back(std::move(key), std::move(value));
  }
  void fail(std::string why) {
    passed = false;
    if (!note.empty()) note += "; ";
    note += std::move(why);
  }
};

}  // namespace phlab
