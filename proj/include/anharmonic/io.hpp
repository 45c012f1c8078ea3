#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "anharmonic/airy_operator.hpp"
#include "anharmonic/error.hpp"
#include "anharmonic/grid.hpp"
#include "anharmonic/profile_lab.hpp"
#include "anharmonic/spectrum.hpp"
#include "anharmonic/version.hpp"

// Serialization: CSV tables and JSON records. All doubles are written with
// 17 significant digits so that write -> read is the identity on bits.

namespace anharmonic {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(c, &end);
  require(end != c && end != nullptr, "invalid grid function",
          "unparseable number '" + s + "'");
  return v;
}

// ---- grid functions: "x,re,im" ------------------------------------------

inline void write_grid_function_csv(std::ostream& os, const GridFunction& f) {
  os << "x,re,im\n";
  for (int i = 0; i < f.grid.n_points; ++i)
    os << format_double(f.grid.x(i)) << ',' << format_double(f.values[i].real())
       << ',' << format_double(f.values[i].imag()) << '\n';
}

inline GridFunction read_grid_function_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "invalid grid function",
          "empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "x,re,im", "invalid grid function",
          "expected header 'x,re,im'");
  std::vector<double> xs;
  std::vector<complex> vs;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string fx, fre, fim;
    require(std::getline(row, fx, ',') && std::getline(row, fre, ',') &&
                std::getline(row, fim, ','),
            "invalid grid function", "row needs three fields: " + line);
    xs.push_back(parse_double(fx));
    vs.push_back(complex(parse_double(fre), parse_double(fim)));
  }
  require(xs.size() >= 2, "invalid grid function", "needs at least two rows");
  Grid g(xs.front(), xs.back(), static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    require(std::abs(xs[i] - g.x(static_cast<int>(i))) <=
                1e-9 * std::max(1.0, std::abs(xs[i])),
            "invalid grid function", "x column is not equispaced");
  return GridFunction(g, std::move(vs));
}

// ---- zero lists: "index,zero" --------------------------------------------

inline void write_zero_list_csv(std::ostream& os,
                                const std::vector<double>& zeros) {
  os << "index,zero\n";
  for (std::size_t i = 0; i < zeros.size(); ++i)
    os << (i + 1) << ',' << format_double(zeros[i]) << '\n';
}

// ---- spectral bases -------------------------------------------------------

inline const char* parity_name(Parity p) {
  return p == Parity::even ? "even" : "odd";
}

inline void write_basis_csv(std::ostream& os, const SpectralBasis& b) {
  os << "n,lambda,parity,norm_const\n";
  for (const EigenMode& m : b.modes)
    os << m.n << ',' << format_double(m.lambda) << ',' << parity_name(m.parity)
       << ',' << format_double(m.norm_const) << '\n';
}

inline nlohmann::json basis_to_json(const SpectralBasis& b) {
  nlohmann::json modes = nlohmann::json::array();
  for (const EigenMode& m : b.modes)
    modes.push_back({{"n", m.n},
                     {"lambda", m.lambda},
                     {"parity", parity_name(m.parity)},
                     {"norm_const", m.norm_const}});
  return {{"modes", modes}, {"cutoff", b.cutoff}};
}

// ---- tabulated profiles: "theta,value" ------------------------------------

inline void write_profile_csv(std::ostream& os, const std::vector<double>& theta,
                              const std::vector<double>& value) {
  require(theta.size() == value.size(), "invalid grid function",
          "profile columns differ in length");
  os << "theta,value\n";
  for (std::size_t i = 0; i < theta.size(); ++i)
    os << format_double(theta[i]) << ',' << format_double(value[i]) << '\n';
}

// ---- kernel bound reports --------------------------------------------------

inline nlohmann::json kernel_report_to_json(const KernelBoundReport& r) {
  return {{"a", r.a},
          {"y", r.y},
          {"d", r.d},
          {"l", r.l},
          {"fitted_C", r.fitted_C},
          {"max_violation_ratio", r.max_violation_ratio}};
}

// ---- scan tables -----------------------------------------------------------

inline const char* classification_name(ProfilePoint::Classification c) {
  switch (c) {
    case ProfilePoint::Classification::convergent:
      return "convergent";
    case ProfilePoint::Classification::divergent:
      return "divergent";
    default:
      return "boundary_unknown";
  }
}

inline void write_scan_csv(std::ostream& os,
                           const std::vector<ProfilePoint>& pts) {
  os << "inv_p,alpha,slope,classification\n";
  for (const ProfilePoint& pt : pts)
    os << format_double(pt.inv_p) << ',' << format_double(pt.alpha) << ','
       << format_double(pt.fitted_slope) << ','
       << classification_name(pt.classification) << '\n';
}

// Critical-line curve on the scan's 1/p axis, for plotting against the
// scan table.
inline void write_region_csv(std::ostream& os,
                             const std::vector<double>& inv_p_grid) {
  os << "inv_p,alpha_critical\n";
  for (double ip : inv_p_grid) {
    const double p = ip == 0.0 ? infinite_p : 1.0 / ip;
    os << format_double(ip) << ',' << format_double(alpha_critical(p)) << '\n';
  }
}

// ---- run manifests ----------------------------------------------------------

struct RunManifest {
  std::string tool_version = version_string;
  std::string command_line;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string timestamp;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  return {{"tool_version", m.tool_version},
          {"command_line", m.command_line},
          {"parameters", params},
          {"timestamp", m.timestamp}};
}

}  // namespace anharmonic
