// Acceptance run: one PASS/FAIL line per criterion; exit status 0 only if all pass.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "phlab/harness.hpp"

using namespace phlab;
using std::numbers::pi;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Independent oracle: first root of cos β cosh β = 1 by bisection on [4, 5].
double beam_beta1() {
  double lo = 4.0, hi = 5.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_lo = std::cos(lo) * std::cosh(lo) - 1.0, f_mid = std::cos(mid) * std::cosh(mid) - 1.0;
    ((f_lo < 0) == (f_mid < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> enumerate_laplace(int lo, int count) {
  std::vector<double> v;
  for (int p = lo; p <= 12; ++p)
    for (int q = lo; q <= 12; ++q) v.push_back(pi * pi * (p * p + q * q));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

int exit_status(const std::string& cmd) {
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const Rectangle kSquare{1.0, 1.0};
harness::SolutionCache cache(kSquare, {});

const Spectrum& galerkin(int m, BoundaryKind bc, int n) { return cache.spectrum(m, bc, n); }

Outcome criterion1() {
  Outcome o;
  const auto d = oned::solve_1d_spectrum(OperatorOrder(1), BoundaryKind::Dirichlet, 10, 1.0);
  const auto n = oned::solve_1d_spectrum(OperatorOrder(1), BoundaryKind::Neumann, 11, 1.0);
  double worst_d = 0, worst_n = 0, worst_c = 0;
  for (int k = 1; k <= 10; ++k) worst_d = std::max(worst_d, rel(d.at(k), k * k * pi * pi));
  o.check(n.at(1) == 0.0, "Neumann first value not 0");
  for (int k = 2; k <= 11; ++k) worst_n = std::max(worst_n, rel(n.at(k), (k - 1) * (k - 1) * pi * pi));
  for (int k = 1; k <= 10; ++k) worst_c = std::max(worst_c, rel(n.at(k + 1), d.at(k)));
  o.check(worst_d <= 1e-10, "Dirichlet rel err " + num(worst_d));
  o.check(worst_n <= 1e-10, "Neumann rel err " + num(worst_n));
  o.check(worst_c <= 1e-8, "mu_{k+1} vs lambda_k rel diff " + num(worst_c));
  if (o.ok) o.detail = "max rel err D " + num(worst_d) + ", N " + num(worst_n) + ", shift " + num(worst_c);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double b = beam_beta1();
  const auto d = oned::solve_1d_spectrum(OperatorOrder(2), BoundaryKind::Dirichlet, 1, 1.0);
  const double e = rel(d.at(1), std::pow(b, 4));
  o.check(e <= 1e-9, "beam rel err " + num(e));
  const auto r2 = oned::check_root_coincidence(OperatorOrder(2), 8, 1.0, 1e-8);
  const auto r3 = oned::check_root_coincidence(OperatorOrder(3), 5, 1.0, 1e-8);
  o.check(r2.passed, "m=2 roots differ");
  o.check(r3.passed, "m=3 roots differ");
  if (o.ok) o.detail = "beta1^4 rel err " + num(e) + "; m=2 (8 roots) and m=3 (5 roots) coincide";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto& d = galerkin(1, BoundaryKind::Dirichlet, 16);
  const auto& n = galerkin(1, BoundaryKind::Neumann, 16);
  const auto ed = enumerate_laplace(1, 10), en = enumerate_laplace(0, 11);
  for (int k = 1; k <= 10; ++k) {
    o.check(rel(d.at(k), ed[k - 1]) <= 1e-3, "Dirichlet k=" + std::to_string(k));
    o.check(k == 1 ? n.at(1) == 0.0 : rel(n.at(k), en[k - 1]) <= 1e-3, "Neumann k=" + std::to_string(k));
  }
  double min_gap = INFINITY;
  for (int k = 1; k <= 9; ++k) min_gap = std::min(min_gap, d.at(k) - n.at(k + 1));
  o.check(min_gap >= 0.5 * pi * pi, "min gap " + num(min_gap));
  if (o.ok) o.detail = "spectra within 0.1%; min lambda_k - mu_{k+1} = " + num(min_gap / (pi * pi)) + " pi^2";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int n : {12, 16, 20}) {
    const auto r = harness::verify_zero_modes(galerkin(2, BoundaryKind::Neumann, n));
    o.check(r.passed, "zero modes at n=" + std::to_string(n));
  }
  double worst_increase = -INFINITY;
  for (auto bc : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
    std::vector<std::vector<double>> spectra;
    for (int n : {12, 16, 20}) spectra.push_back(galerkin(2, bc, n).values());
    const auto t = galerkin::tabulate_convergence({12, 16, 20}, spectra, 20);
    const auto r = harness::verify_nested_convergence(t, "nested");
    o.check(r.passed, std::string("refinement increases ") + to_string(bc) + " eigenvalues");
    worst_increase = std::max(worst_increase, t.max_increase);
  }
  std::vector<std::vector<double>> dir;
  for (int n : {16, 20}) dir.push_back(galerkin(2, BoundaryKind::Dirichlet, n).values());
  const auto conv = galerkin::tabulate_convergence({16, 20}, dir, 8);
  const auto th = harness::verify_theorem_main(galerkin(2, BoundaryKind::Dirichlet, 20),
                                               galerkin(2, BoundaryKind::Neumann, 20), conv, 8);
  o.check(th.passed, "theorem margin rule, margin " + num(th.margin));
  if (o.ok)
    o.detail = "3 zero modes at n=12,16,20; largest increase " + num(worst_increase) + "; margin rule slack " +
               num(th.margin);
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(-1.0, 1.0), unit(0.0, 1.0);
  double worst = 0;
  for (int m = 1; m <= 3; ++m) {
    std::vector<trial::cplx> alpha;
    for (int j = 0; j < m; ++j) alpha.emplace_back(u(rng), u(rng));
    const trial::TrialSpace ts(OperatorOrder(m), {3 * u(rng), 3 * u(rng)}, alpha);
    std::vector<trial::Point> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({unit(rng), unit(rng)});
    const double a = trial::verify_pde_identity(ts, pts), b = trial::verify_mth_gradient_identity(ts, pts);
    o.check(a <= 1e-12, "pde residual m=" + std::to_string(m) + " " + num(a));
    o.check(b <= 1e-12, "gradient residual m=" + std::to_string(m) + " " + num(b));
    worst = std::max({worst, a, b});
  }
  if (o.ok) o.detail = "max relative residual " + num(worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto sol = cache.get(2, BoundaryKind::Dirichlet, 16);
  double worst = -INFINITY, min_sv = INFINITY;
  for (int k = 1; k <= 5; ++k) {
    const double lam = sol->spectrum.at(k);
    const auto cert = trial::certified_chain_bound(*sol, k, trial::select_omega(*sol, k, lam));
    o.check(cert.max_rayleigh <= lam * (1 + 1e-8), "k=" + std::to_string(k) + " max Rayleigh above bound");
    o.check(cert.gram_min_sv > 1e-8, "k=" + std::to_string(k) + " degenerate Gram");
    o.check(cert.dimension == k + 2, "k=" + std::to_string(k) + " wrong dimension");
    worst = std::max(worst, cert.max_rayleigh / lam - 1);
    min_sv = std::min(min_sv, cert.gram_min_sv);
  }
  if (o.ok) o.detail = "max (R/lambda_k - 1) " + num(worst) + ", min Gram sv " + num(min_sv);
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (int m = 1; m <= 12; ++m) o.check(trial::vandermonde_check(trial::roots_of_unity(m)) > 0, "zero at m=" + std::to_string(m));
  const double v2 = trial::vandermonde_check(trial::roots_of_unity(2));
  const double v4 = trial::vandermonde_check(trial::roots_of_unity(4));
  o.check(std::abs(v2 - 2) <= 1e-12, "m=2 gives " + num(v2));
  o.check(std::abs(v4 - 16) <= 1e-12, "m=4 gives " + num(v4));
  if (o.ok) o.detail = "positive for m<=12, |V|=2 (m=2), 16 (m=4)";
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (int m = 1; m <= 2; ++m) {
    const auto r = harness::verify_interpolation(m, 50, 20240917);
    o.check(r.passed, "m=" + std::to_string(m) + ": " + r.note);
  }
  const Poly2 u = Poly2::bubble();
  o.check(std::abs(dj_energy(u, 1) - 256.0 / 45) <= 1e-12, "grad integral");
  o.check(std::abs(dj_energy(u, 2) - 1408.0 / 45) <= 1e-12, "hessian integral");
  o.check(std::abs(dj_energy(u, 0) - 256.0 / 225) <= 1e-12, "L2 integral");
  if (o.ok) o.detail = "100 samples, bubble integrals exact";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::map<int, Spectrum> by_m;
  for (int m = 1; m <= 3; ++m) by_m.emplace(m, galerkin(m, BoundaryKind::Dirichlet, 20));
  const auto r = harness::verify_root_monotonicity(by_m, 5);
  o.check(r.passed, "margin " + num(r.margin));
  if (o.ok) o.detail = "min slack " + num(r.margin);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto r = harness::verify_convex_square(galerkin(2, BoundaryKind::Neumann, 20), 10);
  o.check(r.passed, "margin " + num(r.margin));
  double min_pos = INFINITY;
  for (const auto& d : r.details)
    if (d.rhs > 0) min_pos = std::min(min_pos, d.slack / d.rhs);
  if (o.ok) o.detail = "smallest relative slack over positive k " + num(min_pos);
  return o;
}

Outcome criterion11() {
  Outcome o;
  for (int k = 1; k <= 3; ++k) o.check(harness::oned_counterexample(k, 1e-14).passed, "k=" + std::to_string(k));
  if (o.ok) o.detail = "k = 1, 2, 3";
  return o;
}

Outcome criterion12() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("phlab_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string exe = PHLAB_EXE;
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  const int s1 = exit_status(exe + " all --stable-output --out " + a);
  const int s2 = exit_status(exe + " all --stable-output --out " + b);
  o.check(s1 == 0 && s2 == 0, "phlab all exit " + std::to_string(s1) + "/" + std::to_string(s2));
  const auto ta = slurp(a), tb = slurp(b);
  o.check(!ta.empty() && ta == tb, "outputs differ");
  const int bad = exit_status(exe + " all --no-such-flag 2> /dev/null");
  o.check(bad == 2, "bad flag exit " + std::to_string(bad));
  const int perturbed = exit_status(exe + " all --stable-output --perturb-neumann 2 --out " + (dir / "p.json").string());
  o.check(perturbed == 1, "perturbed exit " + std::to_string(perturbed));
  std::filesystem::remove_all(dir);
  if (o.ok) o.detail = "byte-identical (" + std::to_string(ta.size()) + " bytes), bad flag -> 2, perturbed -> 1";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1D Laplacian exactness", criterion1},      {"1D beam and root coincidence", criterion2},
      {"2D Laplacian reference", criterion3},      {"2D plate zero modes and margin rule", criterion4},
      {"trial-space identities", criterion5},      {"certified chain", criterion6},
      {"Vandermonde", criterion7},                 {"interpolation suite", criterion8},
      {"root monotonicity in m", criterion9},      {"convex-square certificate", criterion10},
      {"1D cosine counterexample", criterion11},   {"determinism and exit codes", criterion12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.ok ? 0 : 1;
    std::cout << "criterion " << (i + 1) << ": " << (o.ok ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
