#pragma once

// phlab command line: oned, spectrum2d, verify <claim>, report, all.
// Exit codes: 0 pass, 1 claim failed, 2 usage/config error, 3 numerical or I/O failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phlab/config.hpp"
#include "phlab/galerkin.hpp"
#include "phlab/harness.hpp"
#include "phlab/io.hpp"
#include "phlab/oned.hpp"

namespace phlab::cli {

enum ExitCode : int { kPass = 0, kClaimFailed = 1, kUsage = 2, kNumerical = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Capability: return kUsage;
    case ErrorKind::Numerical:
    case ErrorKind::Io: return kNumerical;
  }
  return kNumerical;
}

inline void print_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  err << j.dump() << "\n";
}

/// Names accepted by `verify`, besides every standard claim_id.
inline const std::vector<std::string>& verify_aliases() {
  static const std::vector<std::string> names{"chain",         "conjecture", "convex_square", "counterexample",
                                              "interpolation", "monotonicity", "remark12",    "root_coincidence", "theorem",
                                              "weak_minmax",   "zero_modes"};
  return names;
}

namespace detail {

struct RawFlags {
  int m = 0, count = 0, n = 0, k_max = 0;
  std::string bc, domain, format, out, config;
  double lx = 0, ly = 0, length = 0, perturb = 0;
  double tol_zero = 0, tol_root = 0, tol_identity = 0, margin_factor = 0;
  std::uint64_t seed = 0;
  bool stable = false;
  unsigned threads = 0;
  std::string claim;
};

struct Options {
  CLI::Option *m, *bc, *count, *n, *k_max, *domain, *lx, *ly, *length, *format, *out, *config, *seed, *stable,
      *perturb, *tol_zero, *tol_root, *tol_identity, *margin_factor, *threads;
};

inline Options add_common(CLI::App* app, RawFlags& f) {
  Options o{};
  o.m = app->add_option("--m", f.m, "operator order m (1..3)");
  o.bc = app->add_option("--bc", f.bc, "dirichlet or neumann");
  o.count = app->add_option("--count", f.count, "number of eigenvalues or roots");
  o.n = app->add_option("--n", f.n, "Galerkin polynomials per axis");
  o.k_max = app->add_option("--k-max", f.k_max, "largest k checked");
  o.domain = app->add_option("--domain", f.domain, "square or rectangle");
  o.lx = app->add_option("--lx", f.lx, "rectangle width");
  o.ly = app->add_option("--ly", f.ly, "rectangle height");
  o.length = app->add_option("--length", f.length, "interval length (oned)");
  o.format = app->add_option("--format", f.format, "json, csv or markdown");
  o.out = app->add_option("--out", f.out, "output path (default stdout)");
  o.config = app->add_option("--config", f.config, "JSON configuration file");
  o.seed = app->add_option("--seed", f.seed, "random seed");
  o.stable = app->add_flag("--stable-output", f.stable, "zero the runtime field for byte-stable output");
  o.perturb = app->add_option("--perturb-neumann", f.perturb, "scale Neumann spectra (failure injection)");
  o.tol_zero = app->add_option("--tol-zero", f.tol_zero);
  o.tol_root = app->add_option("--tol-root", f.tol_root);
  o.tol_identity = app->add_option("--tol-identity", f.tol_identity);
  o.margin_factor = app->add_option("--margin-factor", f.margin_factor);
  o.threads = app->add_option("--threads", f.threads, "worker threads (default PHLAB_THREADS)");
  return o;
}

inline nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) phlab::detail::fail(ErrorKind::Usage, "config: cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    phlab::detail::fail(ErrorKind::Usage, "config: '" + path + "' is not valid JSON: " + e.what());
  }
}

/// defaults < config file < flags
inline RunConfig resolve(const RawFlags& f, const Options& o) {
  RunConfig c;
  if (o.config->count()) c = validate_config(read_config_file(f.config), c);
  nlohmann::json overlay = nlohmann::json::object();
  auto set = [&](CLI::Option* opt, const char* key, auto value) {
    if (opt->count()) overlay[key] = value;
  };
  set(o.m, "m", f.m);
  set(o.bc, "bc", f.bc);
  set(o.count, "count", f.count);
  set(o.n, "n", f.n);
  set(o.k_max, "k_max", f.k_max);
  set(o.domain, "domain", f.domain);
  set(o.lx, "lx", f.lx);
  set(o.ly, "ly", f.ly);
  set(o.length, "length", f.length);
  set(o.format, "format", f.format);
  set(o.out, "out", f.out);
  set(o.seed, "seed", f.seed);
  set(o.stable, "stable_output", f.stable);
  set(o.perturb, "perturb_neumann", f.perturb);
  set(o.tol_zero, "tol_zero", f.tol_zero);
  set(o.tol_root, "tol_root", f.tol_root);
  set(o.tol_identity, "tol_identity", f.tol_identity);
  set(o.margin_factor, "margin_factor", f.margin_factor);
  set(o.threads, "threads", f.threads);
  return validate_config(overlay, c);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start, const RunConfig& c) {
  if (c.stable_output) return 0.0;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline harness::SuiteConfig suite_config(const RunConfig& c) {
  harness::SuiteConfig s;
  s.tol = c.tol;
  s.rect = c.rect();
  s.seed = c.seed;
  s.perturb_neumann = c.perturb_neumann;
  s.threads = resolve_threads(c.threads);
  return s;
}

inline int emit_spectrum(const Spectrum& s, const RunConfig& c, std::chrono::steady_clock::time_point start) {
  const auto fmt = c.format.empty() ? OutputFormat::Json : parse_format(c.format);
  std::string text;
  switch (fmt) {
    case OutputFormat::Json: {
      auto j = io::spectrum_json(s, c.tol, elapsed_ms(start, c));
      j["config"] = config_json(c);
      text = io::dump_json(j);
      break;
    }
    case OutputFormat::Csv: text = io::spectrum_csv(s.values()); break;
    case OutputFormat::Markdown: text = io::spectrum_markdown(s); break;
  }
  io::write_output(c.out, text);
  return kPass;
}

inline int emit_reports(const std::vector<VerificationReport>& reports, const RunConfig& c, OutputFormat fallback,
                        std::chrono::steady_clock::time_point start) {
  const auto fmt = c.format.empty() ? fallback : parse_format(c.format);
  const bool passed = harness::suite_passed(reports);
  std::string text;
  switch (fmt) {
    case OutputFormat::Json:
      text = io::dump_json(io::suite_json(reports, config_json(c), passed, elapsed_ms(start, c)));
      break;
    case OutputFormat::Markdown: text = io::suite_markdown(reports, passed); break;
    case OutputFormat::Csv: phlab::detail::fail(ErrorKind::Usage, "format: csv is only available for spectra");
  }
  io::write_output(c.out, text);
  return passed ? kPass : kClaimFailed;
}

/// A single parameterized claim driven by the run flags.
inline std::vector<VerificationReport> run_verify(const std::string& claim, const RunConfig& c) {
  using namespace harness;
  const auto rect = c.rect();
  const OperatorOrder m(c.m);
  const auto D = BoundaryKind::Dirichlet;
  const auto N = BoundaryKind::Neumann;
  const auto trusted = galerkin::trusted_count(c.n);
  auto neu = [&](int mm, int n, std::size_t count) {
    auto s = galerkin::solve_2d_spectrum(OperatorOrder(mm), N, n, rect, count, c.tol);
    return c.perturb_neumann == 1.0 ? s : scaled(s, c.perturb_neumann);
  };
  auto dir = [&](int mm, int n, std::size_t count) {
    return galerkin::solve_2d_spectrum(OperatorOrder(mm), D, n, rect, count, c.tol);
  };

  if (claim == "remark12" || claim == "root_coincidence") return {oned::check_root_coincidence(m, c.count, c.length, 1e-8, c.tol)};
  if (claim == "theorem") {
    const int coarse = c.n - 4;
    if (coarse < c.m + 1) phlab::detail::fail(ErrorKind::Usage, "theorem: n must be >= m + 5 for the convergence pair");
    const auto kk = static_cast<std::size_t>(c.k_max);
    const auto fine = dir(c.m, c.n, std::min(trusted, kk));
    const auto conv = galerkin::tabulate_convergence(
        {coarse, c.n}, {dir(c.m, coarse, std::min(galerkin::trusted_count(coarse), kk)).values(), fine.values()},
        std::min(kk, galerkin::trusted_count(coarse)));
    auto r = verify_theorem_main(fine, neu(c.m, c.n, std::min(trusted, kk + c.m)), conv, c.k_max, c.tol);
    r.echo("convergence_n", std::to_string(coarse) + "," + std::to_string(c.n));
    return {r};
  }
  if (claim == "weak_minmax") {
    const auto kk = std::min(trusted, static_cast<std::size_t>(c.k_max));
    return {verify_weak_minmax(dir(c.m, c.n, kk), neu(c.m, c.n, kk), c.k_max)};
  }
  if (claim == "zero_modes")
    return {verify_zero_modes(neu(c.m, c.n, std::min<std::size_t>(trusted, n_poly_dim(2, c.m) + 1)), c.tol)};
  if (claim == "interpolation") return {verify_interpolation(c.m, 50, c.seed)};
  if (claim == "monotonicity") {
    std::map<int, Spectrum> by_m;
    for (int mm = 1; mm <= kMaxOrder; ++mm) by_m.emplace(mm, dir(mm, c.n, static_cast<std::size_t>(c.k_max)));
    return {verify_root_monotonicity(by_m, c.k_max)};
  }
  if (claim == "convex_square") return {verify_convex_square(neu(2, c.n, static_cast<std::size_t>(c.k_max)), c.k_max)};
  if (claim == "conjecture") {
    const auto kk = static_cast<std::size_t>(c.k_max);
    return {conjecture_probe(dir(c.m, c.n, kk), neu(c.m, c.n, kk + n_poly_dim(2, c.m)), 2, c.m, c.k_max)};
  }
  if (claim == "counterexample") {
    std::vector<VerificationReport> out;
    for (int k = 1; k <= c.count; ++k) out.push_back(oned_counterexample(k));
    return out;
  }
  if (claim == "chain") {
    const auto sol = galerkin::solve_2d(m, D, c.n, rect, std::min(trusted, static_cast<std::size_t>(c.k_max)), c.tol);
    VerificationReport r;
    r.claim_id = "chain_certificate";
    echo_spectrum(r, "dirichlet", sol.spectrum);
    for (int k = 1; k <= c.k_max; ++k) {
      const double lam = sol.spectrum.at(k);
      const auto cert = trial::certified_chain_bound(sol, k, trial::select_omega(sol, k, lam), 0, c.tol.tol_identity);
      r.add(k, cert.max_rayleigh, lam * (1.0 + c.tol.tol_identity),
            (lam * (1.0 + c.tol.tol_identity) - cert.max_rayleigh) / lam, cert.certified);
    }
    return {r};
  }
  // Fixed-parameter claims from the standard suite.
  for (const auto& d : standard_claims())
    if (d.claim_id == claim) {
      SolutionCache cache(rect, c.tol);
      return d.run(cache, suite_config(c));
    }
  std::string known;
  for (const auto& a : verify_aliases()) known += " " + a;
  for (const auto& d : standard_claims()) known += " " + d.claim_id;
  phlab::detail::fail(ErrorKind::Usage, "verify: unknown claim '" + claim + "'; known:" + known);
}

}  // namespace detail

/// Entry point; never throws.
inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"phlab: polyharmonic Dirichlet/Neumann eigenvalue laboratory"};
  app.require_subcommand(1);
  detail::RawFlags f;
  auto* oned_cmd = app.add_subcommand("oned", "exact 1D spectrum on (0, L)");
  auto* spec_cmd = app.add_subcommand("spectrum2d", "Galerkin spectrum on a rectangle");
  auto* verify_cmd = app.add_subcommand("verify", "run one verification claim");
  auto* report_cmd = app.add_subcommand("report", "full suite as a Markdown report");
  auto* all_cmd = app.add_subcommand("all", "full acceptance suite as JSON");
  verify_cmd->add_option("claim", f.claim, "claim name")->required();
  // Each subcommand gets its own option objects bound to the same storage.
  std::map<CLI::App*, detail::Options> opts;
  for (auto* sub : {oned_cmd, spec_cmd, verify_cmd, report_cmd, all_cmd}) opts[sub] = detail::add_common(sub, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what(), kUsage);
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    const RunConfig c = detail::resolve(f, opts.at(sub));
    if (sub == oned_cmd)
      return detail::emit_spectrum(oned::solve_1d_spectrum(OperatorOrder(c.m), c.bc, c.count, c.length, c.tol), c,
                                   start);
    if (sub == spec_cmd)
      return detail::emit_spectrum(galerkin::solve_2d_spectrum(OperatorOrder(c.m), c.bc, c.n, c.rect(),
                                                               static_cast<std::size_t>(c.count), c.tol),
                                   c, start);
    if (sub == verify_cmd) return detail::emit_reports(detail::run_verify(f.claim, c), c, OutputFormat::Json, start);
    const auto reports = harness::run_suite(detail::suite_config(c));
    return detail::emit_reports(reports, c, sub == report_cmd ? OutputFormat::Markdown : OutputFormat::Json, start);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    print_error(err, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    print_error(err, "numerical", e.what(), kNumerical);
    return kNumerical;
  }
}

}  // namespace phlab::cli
