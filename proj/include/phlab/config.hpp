#pragma once

// Run configuration: defaults, JSON config files, and range checks.

#include <cstdint>
#include <set>
#include <string>
#include <thread>

#include <json.hpp>

#include "phlab/core.hpp"

namespace phlab {

enum class OutputFormat { Json, Csv, Markdown };

inline const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Markdown: return "markdown";
  }
  return "json";
}

struct RunConfig {
  int m = 1;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  int count = 10;
  int n = 16;
  int k_max = 8;
  std::string domain = "square";  // interval is implied by the oned command
  double lx = 1.0;
  double ly = 1.0;
  double length = 1.0;
  std::string format;  // empty: the command's default
  std::string out;     // empty: stdout
  std::uint64_t seed = 20240917;
  bool stable_output = false;
  double perturb_neumann = 1.0;
  unsigned threads = 0;  // 0: PHLAB_THREADS or hardware concurrency
  ToleranceConfig tol;

  Rectangle rect() const { return domain == "square" ? Rectangle{1.0, 1.0} : Rectangle{lx, ly}; }
};

inline OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "markdown" || s == "md") return OutputFormat::Markdown;
  detail::fail(ErrorKind::Usage, "format: expected json, csv or markdown, got '" + s + "'");
}

inline BoundaryKind parse_bc(const std::string& s) {
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "neumann") return BoundaryKind::Neumann;
  detail::fail(ErrorKind::Usage, "bc: expected dirichlet or neumann, got '" + s + "'");
}

/// Range checks on a fully populated configuration.
inline void check_ranges(const RunConfig& c) {
  if (c.m < 1 || c.m > kMaxOrder)
    detail::fail(ErrorKind::Capability,
                 "m: " + std::to_string(c.m) + " unsupported, supported range is 1.." + std::to_string(kMaxOrder));
  auto usage = [](bool ok, const std::string& msg) {
    if (!ok) detail::fail(ErrorKind::Usage, msg);
  };
  usage(c.count >= 1, "count: must be >= 1");
  usage(c.n >= 1, "n: must be >= 1");
  usage(c.k_max >= 1, "k_max: must be >= 1");
  usage(c.domain == "square" || c.domain == "rectangle", "domain: expected square or rectangle");
  usage(c.lx > 0.0 && std::isfinite(c.lx), "lx: must be positive and finite");
  usage(c.ly > 0.0 && std::isfinite(c.ly), "ly: must be positive and finite");
  usage(c.length > 0.0 && std::isfinite(c.length), "length: must be positive and finite");
  usage(c.perturb_neumann > 0.0 && std::isfinite(c.perturb_neumann), "perturb_neumann: must be positive");
  if (!c.format.empty()) parse_format(c.format);
  c.tol.validate();
}

/// Overlays a JSON object onto `base`; unknown keys and wrong types are usage errors naming the key.
inline RunConfig validate_config(const nlohmann::json& raw, RunConfig base = {}) {
  if (raw.is_null()) {
    check_ranges(base);
    return base;
  }
  if (!raw.is_object()) detail::fail(ErrorKind::Usage, "config: expected a JSON object");
  RunConfig c = base;
  for (const auto& [key, value] : raw.items()) {
    auto number = [&]() -> double {
      if (!value.is_number()) detail::fail(ErrorKind::Usage, key + ": expected a number");
      return value.get<double>();
    };
    auto integer = [&]() -> long long {
      if (!value.is_number_integer()) detail::fail(ErrorKind::Usage, key + ": expected an integer");
      return value.get<long long>();
    };
    auto text = [&]() -> std::string {
      if (!value.is_string()) detail::fail(ErrorKind::Usage, key + ": expected a string");
      return value.get<std::string>();
    };
    if (key == "m") c.m = static_cast<int>(integer());
    else if (key == "bc") c.bc = parse_bc(text());
    else if (key == "count") c.count = static_cast<int>(integer());
    else if (key == "n") c.n = static_cast<int>(integer());
    else if (key == "k_max") c.k_max = static_cast<int>(integer());
    else if (key == "domain") c.domain = text();
    else if (key == "lx") c.lx = number();
    else if (key == "ly") c.ly = number();
    else if (key == "length") c.length = number();
    else if (key == "format") c.format = text();
    else if (key == "out") c.out = text();
    else if (key == "seed") {
      const auto s = integer();
      if (s < 0) detail::fail(ErrorKind::Usage, "seed: must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "stable_output") {
      if (!value.is_boolean()) detail::fail(ErrorKind::Usage, key + ": expected a boolean");
      c.stable_output = value.get<bool>();
    } else if (key == "perturb_neumann") c.perturb_neumann = number();
    else if (key == "threads") {
      const auto t = integer();
      if (t < 0) detail::fail(ErrorKind::Usage, "threads: must be >= 0");
      c.threads = static_cast<unsigned>(t);
    } else if (key == "tol_zero") c.tol.tol_zero = number();
    else if (key == "tol_root") c.tol.tol_root = number();
    else if (key == "tol_identity") c.tol.tol_identity = number();
    else if (key == "margin_factor") c.tol.margin_factor = number();
    else detail::fail(ErrorKind::Usage, "unknown configuration key '" + key + "'");
  }
  check_ranges(c);
  return c;
}

/// Worker count: explicit setting, else PHLAB_THREADS, else logical processors.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PHLAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) detail::fail(ErrorKind::Usage, "PHLAB_THREADS: expected a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Resolved configuration as a JSON object (threads omitted: it never changes results).
inline nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["m"] = c.m;
  j["bc"] = to_string(c.bc);
  j["count"] = c.count;
  j["n"] = c.n;
  j["k_max"] = c.k_max;
  j["domain"] = c.domain;
  j["lx"] = c.rect().lx;
  j["ly"] = c.rect().ly;
  j["length"] = c.length;
  j["seed"] = c.seed;
  j["perturb_neumann"] = c.perturb_neumann;
  j["tol_zero"] = c.tol.tol_zero;
  j["tol_root"] = c.tol.tol_root;
  j["tol_identity"] = c.tol.tol_identity;
  j["margin_factor"] = c.tol.margin_factor;
  return j;
}

}  // namespace phlab
