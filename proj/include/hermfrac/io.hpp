#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hermfrac/basis.hpp"
#include "hermfrac/spaces.hpp"
#include "hermfrac/verify.hpp"

namespace hermfrac {

namespace detail {

/// Shortest round-tripping decimal form, so identical doubles always print
/// identically and reruns are byte-identical.
inline std::string fmt(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string hash_comment(std::string_view config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(std::string(config))));
  return std::string("# config_hash=") + buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SpectralCoeffs <-> JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const SpectralCoeffs& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [mu, v] : c.entries)
    entries.push_back({{"mu", mu.entries}, {"re", v.real()}, {"im", v.imag()}});
  return {{"n", c.dim}, {"N", c.trunc}, {"entries", entries}};
}

inline SpectralCoeffs coeffs_from_json(const nlohmann::json& j) {
  SpectralCoeffs c;
  try {
    c.dim = j.at("n").get<int>();
    c.trunc = j.at("N").get<int>();
    for (const auto& e : j.at("entries")) {
      MultiIndex mu(e.at("mu").get<std::vector<int>>());
      if (mu.dim() != c.dim) throw ParseError("coeffs_from_json: mu dimension mismatch");
      c.entries[mu] = cplx{e.at("re").get<double>(), e.at("im").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("coeffs_from_json: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// GridFunction CSV: one row per node, axis coordinates then value.
// ---------------------------------------------------------------------------

inline void write_grid_csv(std::ostream& os, const QuadratureGrid& grid,
                           const std::vector<cplx>& values, std::string_view config) {
  if (values.size() != grid.size())
    throw DimensionError("write_grid_csv: grid/value size mismatch");
  os << detail::hash_comment(config) << "\n";
  for (int a = 0; a < grid.dim; ++a) os << "x" << (a + 1) << ",";
  os << "re,im\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (double x : grid.point(i)) os << detail::fmt(x) << ",";
    os << detail::fmt(values[i].real()) << "," << detail::fmt(values[i].imag()) << "\n";
  }
}

/// Plot-ready decay curve (y, norm) rows.
inline void write_curve_csv(std::ostream& os,
                            const std::vector<std::pair<double, double>>& samples,
                            std::string_view config) {
  os << detail::hash_comment(config) << "\n";
  os << "y,norm\n";
  for (const auto& [y, v] : samples)
    os << detail::fmt(y) << "," << detail::fmt(v) << "\n";
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const SeminormReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [y, v] : r.samples) samples.push_back({{"scale", y}, {"norm", v}});
  return {{"alpha", r.alpha},     {"alpha_hat", r.alpha_hat}, {"residual", r.residual},
          {"seminorm", r.K},      {"order", r.k},             {"samples", samples}};
}

inline nlohmann::json to_json(const VerificationOutcome& o) {
  return {{"theorem", o.theorem},
          {"input", o.input},
          {"measured", o.measured},
          {"tolerance", o.tolerance},
          {"pass", o.pass}};
}

/// Summary table, one row per outcome. CSV and markdown share the layout.
inline void write_outcome_table(std::ostream& os, const std::vector<VerificationOutcome>& outs,
                                std::string_view config, bool markdown = false) {
  if (!markdown) os << detail::hash_comment(config) << "\n";
  const char* sep = markdown ? " | " : ",";
  if (markdown) os << "| ";
  os << "theorem" << sep << "input" << sep << "pass" << sep << "measured";
  os << (markdown ? " |\n|---|---|---|---|\n" : "\n");
  for (const auto& o : outs) {
    if (markdown) os << "| ";
    os << o.theorem << sep << o.input << sep << (o.pass ? "pass" : "FAIL") << sep;
    bool first = true;
    for (const auto& [k, v] : o.measured) {
      if (!first) os << (markdown ? "; " : ";");
      os << k << "=" << detail::fmt(v);
      first = false;
    }
    os << (markdown ? " |\n" : "\n");
  }
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RangeError("write_file: cannot open " + path);
  os << body;
}

}  // namespace hermfrac
