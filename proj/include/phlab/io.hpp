#pragma once

// JSON, CSV and Markdown artifacts. Every floating-point number is written
// with 17 significant digits so decimal output round-trips exactly.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phlab/config.hpp"
#include "phlab/core.hpp"

namespace phlab::io {

using ordered_json = nlohmann::ordered_json;

inline const char* kSchemaVersion = "1";

/// %.17g, with ".0" appended to integral values so they stay floats; non-finite values are "null".
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {
inline void dump(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::number_float: out += format_double(j.get<double>()); return;
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(k).dump() + ": ";
        dump(v, out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    default: out += j.dump(); return;
  }
}
}  // namespace detail

/// Pretty-printed JSON with 17-digit floats.
inline std::string dump_json(const ordered_json& j) {
  std::string out;
  detail::dump(j, out, 2, 0);
  out += "\n";
  return out;
}

inline ordered_json tolerances_json(const ToleranceConfig& t) {
  ordered_json j;
  j["tol_zero"] = t.tol_zero;
  j["tol_root"] = t.tol_root;
  j["tol_identity"] = t.tol_identity;
  j["margin_factor"] = t.margin_factor;
  return j;
}

inline std::string method_name(const Spectrum& s) {
  return s.is_galerkin() ? "galerkin2d(n=" + std::to_string(s.n_per_axis()) + ")" : "exact1d";
}

inline ordered_json spectrum_json(const Spectrum& s, const ToleranceConfig& tol, double runtime_ms) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["m"] = s.m();
  j["bc"] = to_string(s.bc());
  ordered_json dom;
  dom["shape"] = s.domain().is_interval() ? "interval" : "rectangle";
  dom["lx"] = s.domain().lx();
  if (s.domain().is_rectangle()) dom["ly"] = s.domain().ly();
  j["domain"] = dom;
  j["method"] = method_name(s);
  j["eigenvalues"] = ordered_json::array();
  for (double v : s.values()) j["eigenvalues"].push_back(v);
  j["trusted_count"] = s.trusted_count();
  j["tolerances"] = tolerances_json(tol);
  j["runtime_ms"] = runtime_ms;
  return j;
}

inline ordered_json report_json(const VerificationReport& r) {
  ordered_json j;
  j["claim_id"] = r.claim_id;
  j["passed"] = r.passed;
  j["informational"] = r.informational;
  j["margin"] = r.margin;  // inf (no records) serializes as null
  j["lower_bound_method"] = nullptr;  // reserved for certified lower bounds
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : r.config_echo) echo[k] = v;
  j["config_echo"] = echo;
  j["details"] = ordered_json::array();
  for (const auto& d : r.details) {
    ordered_json row;
    row["k"] = d.k;
    row["lhs"] = d.lhs;
    row["rhs"] = d.rhs;
    row["slack"] = d.slack;
    row["ok"] = d.ok;
    j["details"].push_back(row);
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline ordered_json suite_json(const std::vector<VerificationReport>& reports, const ordered_json& config,
                               bool passed, double runtime_ms) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["passed"] = passed;
  j["claims"] = ordered_json::array();
  for (const auto& r : reports) j["claims"].push_back(report_json(r));
  j["runtime_ms"] = runtime_ms;
  return j;
}

/// CSV with header exactly `k,value`, k 1-based.
inline std::string spectrum_csv(const std::vector<double>& values) {
  std::string out = "k,value\n";
  for (std::size_t k = 0; k < values.size(); ++k) out += std::to_string(k + 1) + "," + format_double(values[k]) + "\n";
  return out;
}

inline std::vector<double> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "k,value")
    phlab::detail::fail(ErrorKind::Io, "csv: missing 'k,value' header");
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) phlab::detail::fail(ErrorKind::Io, "csv: malformed row '" + line + "'");
    const std::string v = line.substr(comma + 1);
    if (v == "null") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    // strtod rather than stod: subnormals must parse, not throw.
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') phlab::detail::fail(ErrorKind::Io, "csv: bad number '" + v + "'");
    out.push_back(x);
  }
  return out;
}

inline std::string spectrum_markdown(const Spectrum& s) {
  std::ostringstream os;
  os << "# Spectrum\n\n";
  os << "- m: " << s.m() << "\n- bc: " << to_string(s.bc()) << "\n- method: " << method_name(s)
     << "\n- trusted_count: " << s.trusted_count() << "\n\n";
  os << "| k | value |\n|---|---|\n";
  for (std::size_t k = 0; k < s.size(); ++k) os << "| " << k + 1 << " | " << format_double(s.values()[k]) << " |\n";
  return os.str();
}

inline std::string badge(const VerificationReport& r) {
  if (r.informational) return "INFO";
  return r.passed ? "PASS" : "FAIL";
}

/// One section per claim_id with a pass/fail badge and the margin table.
inline std::string suite_markdown(const std::vector<VerificationReport>& reports, bool passed) {
  std::ostringstream os;
  os << "# phlab verification report\n\n";
  os << "Overall: **" << (passed ? "PASS" : "FAIL") << "**\n\n";
  os << "| claim | result | margin |\n|---|---|---|\n";
  for (const auto& r : reports) os << "| " << r.claim_id << " | " << badge(r) << " | " << format_double(r.margin) << " |\n";
  for (const auto& r : reports) {
    os << "\n## " << r.claim_id << "\n\n**" << badge(r) << "** margin " << format_double(r.margin) << "\n\n";
    if (!r.config_echo.empty()) {
      for (const auto& [k, v] : r.config_echo) os << "- " << k << ": " << v << "\n";
      os << "\n";
    }
    if (!r.note.empty()) os << r.note << "\n\n";
    os << "| k | lhs | rhs | slack | ok |\n|---|---|---|---|---|\n";
    for (const auto& d : r.details)
      os << "| " << d.k << " | " << format_double(d.lhs) << " | " << format_double(d.rhs) << " | "
         << format_double(d.slack) << " | " << (d.ok ? "yes" : "no") << " |\n";
  }
  return os.str();
}

/// Writes to `path`, or stdout when empty.
inline void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) phlab::detail::fail(ErrorKind::Io, "cannot open output file '" + path + "'");
  f << text;
  if (!f) phlab::detail::fail(ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace phlab::io
