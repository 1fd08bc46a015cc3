#pragma once

// Verification claims comparing Dirichlet and Neumann spectra. Each claim
// returns a VerificationReport; run_suite executes the standard claim list.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "phlab/core.hpp"
#include "phlab/galerkin.hpp"
#include "phlab/oned.hpp"
#include "phlab/poly2.hpp"
#include "phlab/trial_space.hpp"

namespace phlab::harness {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void echo_spectrum(VerificationReport& r, const std::string& tag, const Spectrum& s) {
  r.echo(tag + ".m", std::to_string(s.m()));
  r.echo(tag + ".bc", to_string(s.bc()));
  r.echo(tag + ".domain", s.domain().is_interval() ? "interval(" + fmt(s.domain().lx()) + ")"
                                                   : "rectangle(" + fmt(s.domain().lx()) + "," +
                                                         fmt(s.domain().ly()) + ")");
  r.echo(tag + ".n", std::to_string(s.n_per_axis()));
}

inline void echo_tolerances(VerificationReport& r, const ToleranceConfig& tol) {
  r.echo("tol_zero", fmt(tol.tol_zero));
  r.echo("tol_root", fmt(tol.tol_root));
  r.echo("tol_identity", fmt(tol.tol_identity));
  r.echo("margin_factor", fmt(tol.margin_factor));
}

/// Copy of a spectrum with every value scaled; used to inject failures.
inline Spectrum scaled(const Spectrum& s, double factor) {
  std::vector<double> v = s.values();
  for (double& x : v) x *= factor;
  return Spectrum(OperatorOrder(s.m()), s.bc(), s.domain(), v, s.method(), s.trusted_count());
}

/// π^2 (p^2/lx^2 + q^2/ly^2) for p, q >= 1 (Dirichlet) or >= 0 (Neumann), ascending.
inline std::vector<double> laplacian_closed_form(BoundaryKind bc, const Rectangle& rect, std::size_t count) {
  const int lo = bc == BoundaryKind::Dirichlet ? 1 : 0;
  const int hi = lo + static_cast<int>(count) + 2;
  std::vector<double> out;
  for (int p = lo; p <= hi; ++p)
    for (int q = lo; q <= hi; ++q)
      out.push_back(std::numbers::pi * std::numbers::pi *
                    (p * p / (rect.lx * rect.lx) + q * q / (rect.ly * rect.ly)));
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

/// μ̂_{k+m} < λ̂_k, asserted only when the gap exceeds margin_factor times the
/// convergence estimate of λ̂_k (both sides are upper bounds of the true values).
inline VerificationReport verify_theorem_main(const Spectrum& dir, const Spectrum& neu,
                                              const galerkin::ConvergenceTable& conv, int k_max,
                                              const ToleranceConfig& tol = {}) {
  if (dir.domain().dimension() == 1 || neu.domain().dimension() == 1)
    detail::fail(ErrorKind::InvalidArgument,
                 "verify_theorem_main: strict inequality needs d >= 2; in 1D mu_{k+m} = lambda_k holds "
                 "with equality (run the root_coincidence_1d check instead)");
  detail::require(dir.bc() == BoundaryKind::Dirichlet && neu.bc() == BoundaryKind::Neumann,
                  "verify_theorem_main: need a Dirichlet and a Neumann spectrum");
  detail::require(dir.m() == neu.m() && dir.domain() == neu.domain(),
                  "verify_theorem_main: spectra must share m and domain");
  const int m = dir.m();
  detail::require(k_max >= 1, "verify_theorem_main: k_max must be >= 1");
  detail::require(static_cast<std::size_t>(k_max + m) <= neu.trusted_count(),
                  "verify_theorem_main: k_max + m exceeds the trusted Neumann count");
  detail::require(static_cast<std::size_t>(k_max) <= dir.trusted_count() &&
                      static_cast<std::size_t>(k_max) <= conv.count(),
                  "verify_theorem_main: k_max exceeds the Dirichlet data");

  VerificationReport r;
  r.claim_id = "theorem_main_m" + std::to_string(m);
  echo_spectrum(r, "dirichlet", dir);
  echo_spectrum(r, "neumann", neu);
  echo_tolerances(r, tol);
  r.echo("k_max", std::to_string(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double mu = neu.at(k + m), lam = dir.at(k);
    const double gap = lam - mu;
    const double required = tol.margin_factor * conv.error_estimate[k - 1];
    r.add(k, mu, lam, gap - required, gap > 0.0 && gap > required);
  }
  r.note = "lhs = mu_hat_{k+m}, rhs = lambda_hat_k, slack = gap - margin_factor * convergence estimate";
  return r;
}

/// μ̂_k <= λ̂_k (1 + 1e-9).
inline VerificationReport verify_weak_minmax(const Spectrum& dir, const Spectrum& neu, int k_max) {
  detail::require(dir.m() == neu.m() && dir.domain() == neu.domain(),
                  "verify_weak_minmax: spectra must share m and domain");
  detail::require(static_cast<std::size_t>(k_max) <= std::min(dir.size(), neu.size()),
                  "verify_weak_minmax: k_max exceeds spectrum length");
  VerificationReport r;
  r.claim_id = "weak_minmax_m" + std::to_string(dir.m());
  echo_spectrum(r, "dirichlet", dir);
  echo_spectrum(r, "neumann", neu);
  r.echo("k_max", std::to_string(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double mu = neu.at(k), lam = dir.at(k);
    const double slack = lam * (1.0 + 1e-9) - mu;
    r.add(k, mu, lam, slack, slack >= 0.0);
  }
  return r;
}

/// Exactly n(d, m) values at zero (relative to the first expected positive value), then a positive one.
inline VerificationReport verify_zero_modes(std::span<const double> values, int d, int m,
                                            const ToleranceConfig& tol = {}) {
  const int expected = n_poly_dim(d, m);
  VerificationReport r;
  r.claim_id = "zero_modes_d" + std::to_string(d) + "_m" + std::to_string(m);
  r.echo("d", std::to_string(d));
  r.echo("m", std::to_string(m));
  r.echo("expected_zero_modes", std::to_string(expected));
  if (values.size() <= static_cast<std::size_t>(expected)) {
    r.fail("spectrum too short to contain the first positive eigenvalue");
    return r;
  }
  const double cutoff = tol.tol_zero * std::abs(values[expected]);
  int zeros = 0;
  for (double v : values) zeros += std::abs(v) <= cutoff ? 1 : 0;
  for (int k = 1; k <= expected; ++k) {
    const double v = std::abs(values[k - 1]);
    r.add(k, v, cutoff, cutoff - v, v <= cutoff);
  }
  const double next = values[expected];
  r.add(expected + 1, cutoff, next, next - cutoff, next > cutoff);
  if (zeros != expected) r.fail("found " + std::to_string(zeros) + " zero modes");
  return r;
}

inline VerificationReport verify_zero_modes(const Spectrum& neu, const ToleranceConfig& tol = {}) {
  detail::require(neu.bc() == BoundaryKind::Neumann, "verify_zero_modes: need a Neumann spectrum");
  auto r = verify_zero_modes(neu.values(), neu.domain().dimension(), neu.m(), tol);
  echo_spectrum(r, "neumann", neu);
  return r;
}

/// ∫|D^{m-1}u|^2, ∫|D^m u|^2, ∫|D^{m+1}u|^2 on the reference square.
struct InterpolationIntegrals {
  double lower = 0.0, middle = 0.0, upper = 0.0;
};

inline InterpolationIntegrals interpolation_integrals(const Poly2& u, int m) {
  return {dj_energy(u, m - 1), dj_energy(u, m), dj_energy(u, m + 1)};
}

/// Random p(x, y) ((1 - x^2)(1 - y^2))^{m+1}, deg p <= 3, coefficients uniform in [-1, 1].
inline std::vector<Poly2> interpolation_samples(int m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const Poly2 boundary = Poly2::bubble().pow(m + 1);
  std::vector<Poly2> out;
  for (int s = 0; s < count; ++s) {
    Poly2 p(3, 3);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j) p.coef(i, j) = coef(rng);
    out.push_back(p * boundary);
  }
  return out;
}

/// ∫|D^m u|^2 <= (∫|D^{m+1}u|^2)^{1/2} (∫|D^{m-1}u|^2)^{1/2} and the identity
/// ∫|D^j u|^2 = ∫|Δ^{j/2}u|^2 (j even) or ∫|∇Δ^{(j-1)/2}u|^2 (j odd) for j = m, m+1.
inline VerificationReport verify_interpolation(int m, int sample_count, std::uint64_t seed) {
  detail::require(m >= 1, "verify_interpolation: m must be >= 1");
  VerificationReport r;
  r.claim_id = "interpolation_m" + std::to_string(m);
  r.echo("m", std::to_string(m));
  r.echo("samples", std::to_string(sample_count));
  r.echo("seed", std::to_string(seed));
  const auto samples = interpolation_samples(m, sample_count, seed);
  double worst_identity = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const auto& u = samples[s];
    const auto I = interpolation_integrals(u, m);
    const double rhs = std::sqrt(I.upper * I.lower);
    const double slack = rhs * (1.0 + 1e-12) - I.middle;
    r.add(s + 1, I.middle, rhs, slack, slack >= 0.0);
    for (int j : {m, m + 1}) {
      const double full = dj_energy(u, j);
      const double lap = laplacian_power_energy(u, j);
      worst_identity = std::max(worst_identity, std::abs(full - lap) / std::max(full, 1e-300));
    }
  }
  r.echo("identity_tolerance", fmt(1e-11));
  r.echo("identity_worst_residual", fmt(worst_identity));
  if (!(worst_identity <= 1e-11)) r.fail("Laplacian-power identity residual " + fmt(worst_identity));
  return r;
}

/// (λ̂_k^m)^{1/m} <= (λ̂_k^{m+1})^{1/(m+1)} (1 + 0.01) for consecutive m.
inline VerificationReport verify_root_monotonicity(const std::map<int, Spectrum>& by_m, int k_max,
                                                   double slack_factor = 0.01) {
  VerificationReport r;
  r.claim_id = "root_monotonicity";
  r.echo("k_max", std::to_string(k_max));
  r.echo("relative_slack", fmt(slack_factor));
  for (const auto& [m, s] : by_m) {
    detail::require(s.bc() == BoundaryKind::Dirichlet, "verify_root_monotonicity: need Dirichlet spectra");
    detail::require(s.domain() == by_m.begin()->second.domain(), "verify_root_monotonicity: mixed domains");
    detail::require(static_cast<std::size_t>(k_max) <= s.size(), "verify_root_monotonicity: k_max too large");
    echo_spectrum(r, "dirichlet_m" + std::to_string(m), s);
  }
  for (auto it = by_m.begin(); it != by_m.end(); ++it) {
    auto next = std::next(it);
    if (next == by_m.end()) break;
    const int m = it->first, m1 = next->first;
    for (int k = 1; k <= k_max; ++k) {
      const double lhs = std::pow(it->second.at(k), 1.0 / m);
      const double rhs = std::pow(next->second.at(k), 1.0 / m1);
      const double slack = rhs * (1.0 + slack_factor) - lhs;
      r.add(k, lhs, rhs, slack, slack >= 0.0);
    }
  }
  return r;
}

/// μ̂_k^{(2)} <= (μ_k^{(1)})^2 with the Laplacian Neumann values enumerated exactly.
inline VerificationReport verify_convex_square(const Spectrum& neu2, int k_max) {
  detail::require(neu2.bc() == BoundaryKind::Neumann && neu2.m() == 2 && neu2.domain().is_rectangle(),
                  "verify_convex_square: need a Neumann m = 2 spectrum on a rectangle");
  detail::require(static_cast<std::size_t>(k_max) <= neu2.size(), "verify_convex_square: k_max too large");
  const auto& rect = neu2.domain().as_rectangle();
  const auto exact = laplacian_closed_form(BoundaryKind::Neumann, rect, k_max);
  VerificationReport r;
  r.claim_id = "convex_square";
  echo_spectrum(r, "neumann", neu2);
  r.echo("k_max", std::to_string(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double lhs = neu2.at(k), rhs = exact[k - 1] * exact[k - 1];
    r.add(k, lhs, rhs, rhs - lhs, lhs <= rhs);
  }
  return r;
}

/// λ̂_k(n_{i+1}) <= λ̂_k(n_i) + rel_slack · λ̂_k(n_i) for nested discretizations.
inline VerificationReport verify_nested_convergence(const galerkin::ConvergenceTable& conv, std::string claim_id,
                                                    double rel_slack = 1e-8) {
  VerificationReport r;
  r.claim_id = std::move(claim_id);
  std::string ns;
  for (int n : conv.n_list) ns += (ns.empty() ? "" : ",") + std::to_string(n);
  r.echo("n_list", ns);
  r.echo("relative_slack", fmt(rel_slack));
  for (std::size_t k = 0; k < conv.count(); ++k) {
    double worst = -std::numeric_limits<double>::infinity();
    double allowed = 0.0;
    for (std::size_t i = 1; i < conv.values.size(); ++i) {
      const double inc = conv.values[i][k] - conv.values[i - 1][k];
      const double lim = rel_slack * std::max(conv.values[i - 1][k], 1.0);
      if (inc - lim > worst - allowed) {
        worst = inc;
        allowed = lim;
      }
    }
    r.add(static_cast<int>(k + 1), worst, allowed, allowed - worst, worst <= allowed);
  }
  r.note = "lhs = largest increase under refinement, rhs = allowed increase";
  return r;
}

/// Records λ̂_k - μ̂_{n(d,m)+k}; informational only.
inline VerificationReport conjecture_probe(const Spectrum& dir, const Spectrum& neu, int d, int m, int k_max) {
  const int offset = n_poly_dim(d, m);
  detail::require(static_cast<std::size_t>(offset + k_max) <= neu.size() &&
                      static_cast<std::size_t>(k_max) <= dir.size(),
                  "conjecture_probe: spectra too short");
  VerificationReport r;
  r.claim_id = "conjecture_probe_m" + std::to_string(m);
  r.informational = true;
  echo_spectrum(r, "dirichlet", dir);
  echo_spectrum(r, "neumann", neu);
  r.echo("offset", std::to_string(offset));
  for (int k = 1; k <= k_max; ++k) {
    const double mu = neu.at(offset + k), lam = dir.at(k);
    r.add(k, mu, lam, lam - mu, lam - mu >= 0.0);
  }
  r.note = "conjecture - not asserted";
  return r;
}

/// On (0, 1) with m = 1: v = cos(kπx) = e^{ikπx} - i sin(kπx) lies in U + V and
/// satisfies the Neumann condition, so the strictness argument has no room in 1D.
inline VerificationReport oned_counterexample(int k, double tol = 1e-14) {
  detail::require(k >= 1, "oned_counterexample: k must be >= 1");
  using cplx = std::complex<double>;
  const double w = k * std::numbers::pi;
  VerificationReport r;
  r.claim_id = "counterexample_1d_k" + std::to_string(k);
  r.echo("k", std::to_string(k));
  r.echo("tol", fmt(tol));
  // Neumann trace: v'(x) = -kπ sin(kπx) at both ends.
  const double d0 = std::abs(-w * std::sin(w * 0.0));
  const double d1 = std::abs(-w * std::sin(w * 1.0));
  r.add(0, d0, tol, tol - d0, d0 <= tol);
  r.add(1, d1, tol, tol - d1, d1 <= tol);
  // U + V membership with α_k = -iβ, β = 1: cos(kπx) = e^{ikπx} - i sin(kπx).
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = (i + 0.5) / 100.0;
    const cplx decomposed = std::exp(cplx(0.0, w * x)) - cplx(0.0, 1.0) * std::sin(w * x);
    worst = std::max(worst, std::abs(decomposed - std::cos(w * x)));
  }
  r.add(2, worst, tol, tol - worst, worst <= tol);
  r.note = "sin(k pi x) spans the Dirichlet part, e^{i k pi x} the plane-wave part; their combination cos(k pi x) "
           "is a Neumann eigenfunction, so (U + V) meets the Neumann eigenspace in 1D";
  return r;
}

// ---------------------------------------------------------------------------
// Claim suite

struct SuiteConfig {
  ToleranceConfig tol;
  Rectangle rect{1.0, 1.0};
  std::uint64_t seed = 20240917;
  double perturb_neumann = 1.0;  // != 1 deliberately corrupts Neumann spectra
  unsigned threads = 1;
};

/// Memoized Galerkin solutions keyed by (m, bc, n); safe for concurrent use.
class SolutionCache {
 public:
  explicit SolutionCache(Rectangle rect, ToleranceConfig tol) : rect_(rect), tol_(tol) {}

  std::shared_ptr<const galerkin::GalerkinSolution> get(int m, BoundaryKind bc, int n) {
    const auto key = std::make_tuple(m, static_cast<int>(bc), n);
    std::shared_future<std::shared_ptr<const galerkin::GalerkinSolution>> fut;
    std::promise<std::shared_ptr<const galerkin::GalerkinSolution>> promise;
    bool owner = false;
    {
      std::lock_guard lock(mu_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        fut = promise.get_future().share();
        entries_.emplace(key, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(std::make_shared<const galerkin::GalerkinSolution>(
            galerkin::solve_2d(OperatorOrder(m), bc, n, rect_, galerkin::trusted_count(n), tol_)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return fut.get();
  }

  const Spectrum& spectrum(int m, BoundaryKind bc, int n) { return get(m, bc, n)->spectrum; }

 private:
  Rectangle rect_;
  ToleranceConfig tol_;
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, std::shared_future<std::shared_ptr<const galerkin::GalerkinSolution>>>
      entries_;
};

struct ClaimDescriptor {
  std::string claim_id;
  std::string statement;
  std::function<std::vector<VerificationReport>(SolutionCache&, const SuiteConfig&)> run;
};

namespace detail {

inline Spectrum neumann(SolutionCache& cache, const SuiteConfig& cfg, int m, int n) {
  const auto& s = cache.spectrum(m, BoundaryKind::Neumann, n);
  return cfg.perturb_neumann == 1.0 ? s : scaled(s, cfg.perturb_neumann);
}

inline galerkin::ConvergenceTable dirichlet_convergence(SolutionCache& cache, int m, std::vector<int> ns,
                                                        std::size_t count) {
  std::vector<std::vector<double>> spectra;
  for (int n : ns) spectra.push_back(cache.spectrum(m, BoundaryKind::Dirichlet, n).values());
  return galerkin::tabulate_convergence(ns, spectra, count);
}

inline VerificationReport relative_match(std::string id, const std::vector<double>& got,
                                         const std::vector<double>& want, double tol) {
  VerificationReport r;
  r.claim_id = std::move(id);
  r.echo("relative_tolerance", fmt(tol));
  for (std::size_t k = 0; k < want.size(); ++k) {
    if (want[k] == 0.0) {
      r.add(static_cast<int>(k + 1), got[k], want[k], tol - std::abs(got[k]), std::abs(got[k]) <= tol);
      continue;
    }
    const double rel = std::abs(got[k] - want[k]) / std::abs(want[k]);
    r.add(static_cast<int>(k + 1), got[k], want[k], tol - rel, rel <= tol);
  }
  return r;
}

// Bisection on cos β cosh β - 1 over (4, 5): first clamped-beam root.
inline double clamped_beam_beta1() {
  double lo = 4.0, hi = 5.0;
  auto f = [](double b) { return std::cos(b) * std::cosh(b) - 1.0; };
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0) == (f(lo) < 0.0) ? lo = mid : hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// The standard claim list, in claim_id order.
inline std::vector<ClaimDescriptor> standard_claims() {
  using detail::neumann;
  const auto D = BoundaryKind::Dirichlet;
  const auto N = BoundaryKind::Neumann;
  std::vector<ClaimDescriptor> c;

  c.push_back({"beam_clamped", "first clamped-beam eigenvalue equals beta_1^4 with cos(b)cosh(b) = 1",
               [](SolutionCache&, const SuiteConfig& cfg) {
                 const double beta = detail::clamped_beam_beta1();
                 const auto s = oned::solve_1d_spectrum(OperatorOrder(2), BoundaryKind::Dirichlet, 1, 1.0, cfg.tol);
                 return std::vector{detail::relative_match("beam_clamped", {s.at(1)}, {std::pow(beta, 4)}, 1e-9)};
               }});

  c.push_back({"chain_certificate", "max Rayleigh quotient on U + V_omega is at most lambda_hat_k (m = 2, n = 16)",
               [](SolutionCache& cache, const SuiteConfig& cfg) {
                 const auto sol = cache.get(2, BoundaryKind::Dirichlet, 16);
                 VerificationReport r;
                 r.claim_id = "chain_certificate";
                 echo_spectrum(r, "dirichlet", sol->spectrum);
                 r.echo("tol_identity", fmt(cfg.tol.tol_identity));
                 for (int k = 1; k <= 5; ++k) {
                   const double lam = sol->spectrum.at(k);
                   const auto omega = trial::select_omega(*sol, k, lam);
                   const auto cert = trial::certified_chain_bound(*sol, k, omega, 0, cfg.tol.tol_identity);
                   const double bound = lam * (1.0 + cfg.tol.tol_identity);
                   const bool ok = cert.certified && cert.gram_min_sv > 1e-8 && cert.dimension == k + 2 &&
                                   cert.quadrature_change <= 1e-10;
                   r.add(k, cert.max_rayleigh, bound, (bound - cert.max_rayleigh) / lam, ok);
                 }
                 return std::vector{r};
               }});

  c.push_back({"conjecture_probe", "mu_hat_{n(d,m)+k} <= lambda_hat_k (report only)",
               [=](SolutionCache& cache, const SuiteConfig& cfg) {
                 return std::vector{conjecture_probe(cache.spectrum(2, D, 20), neumann(cache, cfg, 2, 20), 2, 2, 5)};
               }});

  c.push_back({"convex_square", "mu_hat_k^(2) <= (mu_k^(1))^2 on the square",
               [](SolutionCache& cache, const SuiteConfig& cfg) {
                 return std::vector{verify_convex_square(neumann(cache, cfg, 2, 20), 10)};
               }});

  c.push_back({"counterexample_1d", "cos(k pi x) lies in U + V and in the Neumann eigenspace",
               [](SolutionCache&, const SuiteConfig&) {
                 std::vector<VerificationReport> out;
                 for (int k = 1; k <= 3; ++k) out.push_back(oned_counterexample(k));
                 return out;
               }});

  c.push_back({"hm0_distance", "V_omega stays at least 1% away from the discrete H^m_0 space",
               [](SolutionCache& cache, const SuiteConfig&) {
                 VerificationReport r;
                 r.claim_id = "hm0_distance";
                 for (int m = 1; m <= 2; ++m) {
                   const auto sol = cache.get(m, BoundaryKind::Dirichlet, 16);
                   const double lam = sol->spectrum.at(1);
                   const auto omega = trial::select_omega(*sol, 1, lam);
                   const double dist = trial::hm0_distance(*sol, omega);
                   r.add(m, dist, 0.01, dist - 0.01, dist >= 0.01);
                 }
                 return std::vector{r};
               }});

  c.push_back({"interpolation", "integral interpolation inequality and Laplacian-power identity",
               [](SolutionCache&, const SuiteConfig& cfg) {
                 return std::vector{verify_interpolation(1, 50, cfg.seed), verify_interpolation(2, 50, cfg.seed)};
               }});

  c.push_back({"laplace_reference", "m = 1 Galerkin spectra on the rectangle match pi^2 (p^2 + q^2)",
               [=](SolutionCache& cache, const SuiteConfig& cfg) {
                 auto d = cache.spectrum(1, D, 16).values();
                 auto n = neumann(cache, cfg, 1, 16).values();
                 d.resize(10);
                 n.resize(10);
                 return std::vector{
                     detail::relative_match("laplace_reference_dirichlet", d, laplacian_closed_form(D, cfg.rect, 10), 1e-3),
                     detail::relative_match("laplace_reference_neumann", n, laplacian_closed_form(N, cfg.rect, 10), 1e-3)};
               }});

  c.push_back({"nested_convergence", "plate eigenvalues do not increase under refinement n = 12, 16, 20",
               [](SolutionCache& cache, const SuiteConfig& cfg) {
                 std::vector<VerificationReport> out;
                 for (auto bc : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
                   std::vector<std::vector<double>> spectra;
                   for (int n : {12, 16, 20}) {
                     auto s = bc == BoundaryKind::Neumann ? neumann(cache, cfg, 2, n) : cache.spectrum(2, bc, n);
                     spectra.push_back(s.values());
                   }
                   out.push_back(verify_nested_convergence(galerkin::tabulate_convergence({12, 16, 20}, spectra, 20),
                                                           "nested_convergence_m2_" + std::string(to_string(bc))));
                 }
                 return out;
               }});

  c.push_back({"oned_exact","1D m = 1 spectra equal k^2 pi^2",
               [](SolutionCache&, const SuiteConfig& cfg) {
                 std::vector<double> want_d, want_n{0.0};
                 for (int k = 1; k <= 10; ++k) want_d.push_back(k * k * std::numbers::pi * std::numbers::pi);
                 for (int k = 1; k <= 9; ++k) want_n.push_back(k * k * std::numbers::pi * std::numbers::pi);
                 const auto d = oned::solve_1d_spectrum(OperatorOrder(1), BoundaryKind::Dirichlet, 10, 1.0, cfg.tol);
                 const auto n = oned::solve_1d_spectrum(OperatorOrder(1), BoundaryKind::Neumann, 10, 1.0, cfg.tol);
                 return std::vector{detail::relative_match("oned_exact_dirichlet", d.values(), want_d, 1e-10),
                                    detail::relative_match("oned_exact_neumann", n.values(), want_n, 1e-10)};
               }});

  c.push_back({"root_coincidence_1d", "1D positive Dirichlet and Neumann roots coincide",
               [](SolutionCache&, const SuiteConfig& cfg) {
                 std::vector<VerificationReport> out;
                 const int counts[] = {10, 8, 5};
                 for (int m = 1; m <= 3; ++m) {
                   auto r = oned::check_root_coincidence(OperatorOrder(m), counts[m - 1], 1.0, 1e-8, cfg.tol);
                   r.claim_id = "root_coincidence_1d_m" + std::to_string(m);
                   out.push_back(r);
                 }
                 return out;
               }});

  c.push_back({"root_monotonicity", "(lambda_k^m)^{1/m} is nondecreasing in m",
               [](SolutionCache& cache, const SuiteConfig&) {
                 std::map<int, Spectrum> by_m;
                 for (int m = 1; m <= 3; ++m) by_m.emplace(m, cache.spectrum(m, BoundaryKind::Dirichlet, 20));
                 auto r = verify_root_monotonicity(by_m, 5);
                 for (int m = 1; m <= 3; ++m) {
                   const auto conv = detail::dirichlet_convergence(cache, m, {16, 20}, 5);
                   r.echo("convergence_estimate_m" + std::to_string(m) + "_k1", fmt(conv.error_estimate[0]));
                 }
                 return std::vector{r};
               }});

  for (int m = 1; m <= 3; ++m) {
    const int n_fine = m == 1 ? 16 : 20;
    const int n_coarse = m == 1 ? 12 : 16;
    const int k_max = m == 1 ? 9 : 8;
    c.push_back({"theorem_main_m" + std::to_string(m), "mu_hat_{k+m} < lambda_hat_k with convergence margin",
                 [=](SolutionCache& cache, const SuiteConfig& cfg) {
                   const auto conv = detail::dirichlet_convergence(cache, m, {n_coarse, n_fine},
                                                                   static_cast<std::size_t>(k_max));
                   auto r = verify_theorem_main(cache.spectrum(m, D, n_fine), neumann(cache, cfg, m, n_fine), conv,
                                                k_max, cfg.tol);
                   r.echo("convergence_n", std::to_string(n_coarse) + "," + std::to_string(n_fine));
                   return std::vector{r};
                 }});
  }

  c.push_back({"trial_identities", "(-Delta)^m v = |omega|^{2m} v and |D^m v|^2 = |omega|^{2m} |v|^2 pointwise",
               [](SolutionCache&, const SuiteConfig& cfg) {
                 VerificationReport r;
                 r.claim_id = "trial_identities";
                 r.echo("seed", std::to_string(cfg.seed));
                 std::mt19937_64 rng(cfg.seed);
                 std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.0, 1.0);
                 for (int m = 1; m <= 3; ++m) {
                   std::vector<trial::cplx> alpha;
                   for (int j = 0; j < m; ++j) alpha.emplace_back(u(rng), u(rng));
                   const double radius = 0.5 + 2.5 * pos(rng), theta = 2.0 * std::numbers::pi * pos(rng);
                   const trial::TrialSpace ts(OperatorOrder(m), {radius * std::cos(theta), radius * std::sin(theta)},
                                              alpha);
                   std::vector<trial::Point> pts;
                   for (int i = 0; i < 100; ++i) pts.push_back({pos(rng), pos(rng)});
                   const double pde = trial::verify_pde_identity(ts, pts);
                   const double quad = trial::verify_mth_gradient_identity(ts, pts);
                   r.add(2 * m - 1, pde, 1e-12, 1e-12 - pde, pde <= 1e-12);
                   r.add(2 * m, quad, 1e-12, 1e-12 - quad, quad <= 1e-12);
                 }
                 r.note = "records 2m-1: polyharmonic identity residual, 2m: m-th gradient identity residual";
                 return std::vector{r};
               }});

  c.push_back({"vandermonde", "Vandermonde determinant of the m-th roots of unity is non-zero",
               [](SolutionCache&, const SuiteConfig&) {
                 VerificationReport r;
                 r.claim_id = "vandermonde";
                 for (int m = 1; m <= 12; ++m) {
                   const auto roots = trial::roots_of_unity(m);
                   const double det = trial::vandermonde_check(roots);
                   r.add(m, det, 0.0, det, det > 0.0);
                 }
                 return std::vector{r};
               }});

  c.push_back({"weak_minmax", "mu_hat_k <= lambda_hat_k",
               [](SolutionCache& cache, const SuiteConfig& cfg) {
                 std::vector<VerificationReport> out;
                 const int ns[] = {16, 20, 14};
                 for (int m = 1; m <= 3; ++m) {
                   const int n = ns[m - 1];
                   out.push_back(verify_weak_minmax(cache.spectrum(m, BoundaryKind::Dirichlet, n),
                                                    neumann(cache, cfg, m, n), 20));
                 }
                 return out;
               }});

  c.push_back({"zero_modes", "Neumann spectra have exactly n(d, m) zero eigenvalues",
               [](SolutionCache& cache, const SuiteConfig& cfg) {
                 std::vector<VerificationReport> out;
                 for (int m = 1; m <= 3; ++m) {
                   const auto oned = oned::solve_1d_spectrum(OperatorOrder(m), BoundaryKind::Neumann, m + 2, 1.0, cfg.tol);
                   out.push_back(verify_zero_modes(oned, cfg.tol));
                   for (int n : {12, 16, 20}) {
                     auto r = verify_zero_modes(neumann(cache, cfg, m, n), cfg.tol);
                     r.claim_id += "_n" + std::to_string(n);
                     out.push_back(r);
                   }
                 }
                 return out;
               }});

  std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.claim_id < b.claim_id; });
  return c;
}

/// Runs claims on cfg.threads workers; the output order is the claim order regardless of scheduling.
inline std::vector<VerificationReport> run_suite(const std::vector<ClaimDescriptor>& claims, const SuiteConfig& cfg) {
  SolutionCache cache(cfg.rect, cfg.tol);
  std::vector<std::vector<VerificationReport>> results(claims.size());
  std::vector<std::exception_ptr> errors(claims.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < claims.size(); i = next++) {
      try {
        results[i] = claims[i].run(cache, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(claims.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<VerificationReport> out;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (auto& r : results[i]) out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<VerificationReport> run_suite(const SuiteConfig& cfg) { return run_suite(standard_claims(), cfg); }

/// True when every non-informational report passed.
inline bool suite_passed(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.informational || r.passed; });
}

}  // namespace phlab::harness
