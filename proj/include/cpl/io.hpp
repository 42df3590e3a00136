#pragma once

// Text formats read and written by the command-line tool.
//
// Data definition file: one `key = value` per line, `#` starts a comment.
//   n                  dimension (required)
//   profile            rnt | rnt-perturbed | table (required)
//   m, q               RNT parameters (rnt, rnt-perturbed)
//   perturb_amplitude  A in u' = u'_RNT + A exp(-(r - r_+) / width)
//   perturb_width      width > 0
//   table              path of a two-column table "r dudr" (table); relative
//                      paths are resolved against the data file's directory
//   r_start            inner radius (table)
//   field              rnt | none; rnt is the Coulomb field Q x / |x|^n
//   charge             Q of the Coulomb field for table profiles (default 0)
//   field_scale        multiplies the field (default 1)
//   horizon            round | spheroid (default round)
//   horizon_aspect     polar / equatorial semi-axis of a spheroidal horizon
//                      whose equatorial semi-axis is r_start
//
// Surface table: header lines start with `#`, then one node per line:
//   theta phi rho [e1 e2 e3]
// The header must contain `# n = <n>`, `# mode = axisymmetric|full` and
// `# nodes = <polar count>` (plus `# azimuth = <count>` for full grids). The
// optional e columns are the ambient field at the node in reduced coordinates.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpl/errors.hpp"
#include "cpl/exact_rnt.hpp"
#include "cpl/graph_data.hpp"
#include "cpl/surface.hpp"

namespace cpl {

namespace io_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& s) { return s.substr(0, s.find('#')); }

inline double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    throw FormatError(what + ": expected a finite number, got '" + text + "'");
  return v;
}

inline int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw FormatError(what + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

inline std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot open '" + p.string() + "'");
  return in;
}

}  // namespace io_detail

enum class ProfileKind { rnt, rnt_perturbed, table };

struct DataDefinition {
  int n = 3;
  ProfileKind profile = ProfileKind::rnt;
  double m = 1.0, q = 0.0;
  double perturb_amplitude = 0.0, perturb_width = 1.0;
  std::filesystem::path table;
  double r_start = 0.0;
  bool field = true;
  double charge = 0.0;
  double field_scale = 1.0;
  bool spheroidal_horizon = false;
  double horizon_aspect = 1.0;
};

inline DataDefinition parse_data_definition(std::istream& in, const std::filesystem::path& base_dir = {}) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = io_detail::trim(io_detail::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = io_detail::trim(body.substr(0, eq));
    const std::string value = io_detail::trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) throw FormatError("line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second) throw FormatError("duplicate key '" + key + "'");
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto need = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw FormatError("missing key '" + key + "'");
    return *v;
  };
  auto num = [&](const std::string& key, double fallback) {
    auto v = take(key);
    return v ? io_detail::parse_double(*v, key) : fallback;
  };

  DataDefinition d;
  d.n = io_detail::parse_int(need("n"), "n");
  const std::string profile = need("profile");
  if (profile == "rnt") d.profile = ProfileKind::rnt;
  else if (profile == "rnt-perturbed") d.profile = ProfileKind::rnt_perturbed;
  else if (profile == "table") d.profile = ProfileKind::table;
  else throw FormatError("profile must be rnt, rnt-perturbed or table, got '" + profile + "'");

  if (d.profile == ProfileKind::table) {
    std::filesystem::path t = need("table");
    d.table = t.is_absolute() ? t : base_dir / t;
    d.r_start = io_detail::parse_double(need("r_start"), "r_start");
    d.charge = num("charge", 0.0);
  } else {
    d.m = io_detail::parse_double(need("m"), "m");
    d.q = num("q", 0.0);
    if (d.profile == ProfileKind::rnt_perturbed) {
      d.perturb_amplitude = io_detail::parse_double(need("perturb_amplitude"), "perturb_amplitude");
      d.perturb_width = num("perturb_width", 1.0);
    }
  }
  if (auto f = take("field")) {
    if (*f == "rnt") d.field = true;
    else if (*f == "none") d.field = false;
    else throw FormatError("field must be rnt or none, got '" + *f + "'");
  }
  d.field_scale = num("field_scale", 1.0);
  if (auto h = take("horizon")) {
    if (*h == "round") d.spheroidal_horizon = false;
    else if (*h == "spheroid") d.spheroidal_horizon = true;
    else throw FormatError("horizon must be round or spheroid, got '" + *h + "'");
  }
  d.horizon_aspect = num("horizon_aspect", 1.0);
  if (!kv.empty()) throw FormatError("unknown key '" + kv.begin()->first + "'");
  if (!(d.horizon_aspect > 0.0)) throw FormatError("horizon_aspect must be positive");
  return d;
}

inline DataDefinition read_data_definition(const std::filesystem::path& path) {
  auto in = io_detail::open_input(path);
  return parse_data_definition(in, path.parent_path());
}

/// Two whitespace-separated columns r, du/dr; `#` comments.
inline std::pair<std::vector<double>, std::vector<double>> read_slope_table(const std::filesystem::path& path) {
  auto in = io_detail::open_input(path);
  std::vector<double> r, s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = io_detail::trim(io_detail::strip_comment(line));
    if (body.empty()) continue;
    std::istringstream ls(body);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra))
      throw FormatError(path.string() + " line " + std::to_string(lineno) + ": expected two columns");
    r.push_back(io_detail::parse_double(a, "r"));
    s.push_back(io_detail::parse_double(b, "dudr"));
  }
  return {std::move(r), std::move(s)};
}

/// Charge carried by the data's field (before it is evaluated on a surface).
inline double data_charge(const DataDefinition& d) {
  if (!d.field) return 0.0;
  return d.field_scale * (d.profile == ProfileKind::table ? d.charge : d.q);
}

inline RadialGraphData build_graph(const DataDefinition& d) {
  switch (d.profile) {
    case ProfileKind::rnt: {
      auto g = rnt_graph(RntParams(d.n, d.m, d.q), d.field_scale);
      if (!d.field) g.field = [](double) { return 0.0; };
      return g;
    }
    case ProfileKind::rnt_perturbed: {
      auto g = perturbed_rnt_graph(RntParams(d.n, d.m, d.q), d.perturb_amplitude, d.perturb_width, d.field_scale);
      if (!d.field) g.field = [](double) { return 0.0; };
      return g;
    }
    default: {
      auto [r, s] = read_slope_table(d.table);
      return table_graph(d.n, d.r_start, std::move(r), std::move(s), data_charge(d), "table " + d.table.filename().string());
    }
  }
}

/// Horizon surface of the data on `grid`: the sphere of radius r_start, or a
/// spheroid with equatorial semi-axis r_start.
inline StarShapedSurface build_horizon(const DataDefinition& d, const RadialGraphData& g, const SphereGrid& grid) {
  if (!d.spheroidal_horizon) return make_sphere(grid, g.r_start).relabeled("horizon");
  return make_spheroid(grid, g.r_start, d.horizon_aspect * g.r_start).relabeled("horizon");
}

inline VectorField build_field(const DataDefinition& d) { return radial_field(d.n, data_charge(d)); }

// --- surface tables ------------------------------------------------------------

inline void write_surface(std::ostream& os, const StarShapedSurface& s, const std::vector<Vec3>* field = nullptr) {
  const SphereGrid& g = s.grid();
  os << "# star-shaped surface: radial function on grid nodes\n";
  os << "# n = " << g.dimension() << "\n";
  os << "# mode = " << to_string(g.mode()) << "\n";
  os << "# nodes = " << g.polar_count() << "\n";
  if (g.mode() == GridMode::full) os << "# azimuth = " << g.azimuth_count() << "\n";
  os << "# columns: theta phi rho" << (field ? " e1 e2 e3" : "") << "\n";
  char buf[64];
  auto put = [&](double v, const char* sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << sep;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    put(g.polar_angle(i), " ");
    put(g.azimuth(i), " ");
    if (field) {
      put(s.rho()[i], " ");
      put((*field)[i][0], " ");
      put((*field)[i][1], " ");
      put((*field)[i][2], "\n");
    } else {
      put(s.rho()[i], "\n");
    }
  }
}

struct SurfaceTable {
  StarShapedSurface surface;
  std::optional<std::vector<Vec3>> field;
};

inline SurfaceTable read_surface(std::istream& in, const std::string& label = "file") {
  std::map<std::string, std::string> header;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = io_detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos)
        header[io_detail::trim(t.substr(1, eq - 1))] = io_detail::trim(t.substr(eq + 1));
      continue;
    }
    std::istringstream ls(t);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(io_detail::parse_double(tok, "line " + std::to_string(lineno)));
    if (row.size() != 3 && row.size() != 6)
      throw FormatError("line " + std::to_string(lineno) + ": expected 3 or 6 columns");
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError("line " + std::to_string(lineno) + ": column count changes");
    rows.push_back(std::move(row));
  }
  auto need = [&](const std::string& key) {
    auto it = header.find(key);
    if (it == header.end()) throw FormatError("surface header lacks '# " + key + " = ...'");
    return it->second;
  };
  const int n = io_detail::parse_int(need("n"), "n");
  GridMode mode;
  try {
    mode = parse_grid_mode(need("mode"));
  } catch (const ParameterError& e) {
    throw FormatError(e.what());
  }
  const int nodes = io_detail::parse_int(need("nodes"), "nodes");
  SphereGrid grid = mode == GridMode::full
                        ? SphereGrid::full(nodes, io_detail::parse_int(need("azimuth"), "azimuth"))
                        : SphereGrid::axisymmetric(n, nodes);
  if (grid.dimension() != n) throw FormatError("full grids exist only for n = 3");
  if (rows.size() != grid.size())
    throw FormatError("surface has " + std::to_string(rows.size()) + " nodes, grid expects " +
                      std::to_string(grid.size()));
  std::vector<double> rho(rows.size());
  std::optional<std::vector<Vec3>> field;
  if (!rows.empty() && rows.front().size() == 6) field.emplace(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i][0] - grid.polar_angle(i)) > 1e-9 || std::abs(rows[i][1] - grid.azimuth(i)) > 1e-9)
      throw FormatError("node " + std::to_string(i) + " angles do not match the grid");
    rho[i] = rows[i][2];
    if (field) (*field)[i] = {rows[i][3], rows[i][4], rows[i][5]};
  }
  // rho <= 0 is a parameter error raised by the surface constructor
  return {StarShapedSurface(grid, std::move(rho), label), std::move(field)};
}

inline SurfaceTable read_surface(const std::filesystem::path& path) {
  auto in = io_detail::open_input(path);
  return read_surface(in, path.filename().string());
}

}  // namespace cpl
