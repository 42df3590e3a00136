#pragma once

// Command implementations behind the command-line tool. Each returns its JSON
// document (and CSV text where applicable) plus an exit code, so the same code
// paths are callable from tests.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cpl/corpus.hpp"
#include "cpl/exact_rnt.hpp"
#include "cpl/graph_data.hpp"
#include "cpl/imcf.hpp"
#include "cpl/inequalities.hpp"
#include "cpl/io.hpp"
#include "cpl/surface.hpp"

namespace cpl {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitFlowBreakdown = 3, kExitEnergyCondition = 4 };

inline constexpr double kEnergyConditionTolerance = 1e-9;
inline constexpr double kMonotonicityTolerance = 1e-8;
inline constexpr double kNewtonMaclaurinTolerance = 1e-10;

struct CommandOutput {
  int exit_code = kExitOk;
  Json document;
  std::string csv;
  std::string message;  // for stderr when exit_code != 0
};

inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// --- rnt-report ---------------------------------------------------------------

struct RntReportConfig {
  RntParams params;
  int samples = 16;         // radii r_+ * 10^{k / (samples - 1)}, k = 0..samples-1
};

inline Json rnt_report(const RntReportConfig& cfg) {
  const RntParams& p = cfg.params;
  if (cfg.samples < 2) throw ParameterError("rnt-report needs at least 2 samples");
  const HorizonRadii h = horizon_radii(p);
  const double area = omega(p.n) * std::pow(h.r_plus, p.n - 1.0);
  Json j;
  j["command"] = "rnt-report";
  j["n"] = p.n;
  j["m"] = p.m;
  j["q"] = p.q;
  j["extremal"] = h.extremal;
  j["r_plus"] = h.r_plus;
  j["r_minus"] = h.r_minus;
  j["horizon_area"] = area;
  j["area_radius"] = area_radius(area, p.n);
  j["mass_from_horizon"] = mass_from_horizon(area, p.q, p.n);

  std::vector<double> radii;
  for (int k = 0; k < cfg.samples; ++k) radii.push_back(h.r_plus * std::pow(10.0, k / (cfg.samples - 1.0)));
  Json lapse_rows = Json::array(), curv_rows = Json::array();
  for (double r : radii) {
    lapse_rows.push_back({{"r", r}, {"lapse", lapse(p, r)}});
    curv_rows.push_back({{"r", r}, {"scalar_curvature", rnt_scalar_curvature(p, r)}});
  }
  j["lapse_samples"] = lapse_rows;
  j["scalar_curvature_samples"] = curv_rows;

  Json emb;
  if (h.extremal) {
    emb["available"] = false;
    emb["note"] = "n/a: extremal data has a degenerate horizon";
    emb["profile"] = Json::array();
  } else {
    const auto u = embed_profile(p, radii);
    Json rows = Json::array();
    for (std::size_t i = 0; i < radii.size(); ++i) rows.push_back({{"r", radii[i]}, {"u", u[i]}});
    emb["available"] = true;
    emb["profile"] = rows;
  }
  j["embedding"] = emb;

  const auto reports = penrose_report(p.m, area, p.q, p.n);
  j["penrose"] = to_json(*find_report(reports, "penrose"));
  j["certificates"] = to_json(reports);
  return j;
}

// --- imcf-run -------------------------------------------------------------------

enum class InitialShape { sphere, spheroid, convex, star, file };

inline InitialShape parse_shape(const std::string& s) {
  if (s == "sphere") return InitialShape::sphere;
  if (s == "spheroid") return InitialShape::spheroid;
  if (s == "convex") return InitialShape::convex;
  if (s == "star") return InitialShape::star;
  if (s == "file") return InitialShape::file;
  throw ParameterError("unknown shape '" + s + "' (expected sphere|spheroid|convex|star|file)");
}

struct FlowConfig {
  int n = 3;
  int resolution = 0;  // 0: default_resolution()
  GridMode mode = GridMode::axisymmetric;
  InitialShape shape = InitialShape::sphere;
  double radius = 1.0;       // sphere
  double a = 1.0, c = 2.0;   // spheroid semi-axes (equatorial, polar)
  std::uint64_t seed = 1;    // convex / star corpora
  int index = 0;
  std::string surface_file;  // shape = file
  double charge = 1.0;       // Coulomb field Q x / |x|^n for the flux chain
  double t_end = 1.0;
  double dt = 1e-3;
  int sample_every = 10;
  FlowOptions options;
};

inline StarShapedSurface initial_surface(const FlowConfig& cfg) {
  if (cfg.shape == InitialShape::file) {
    if (cfg.surface_file.empty()) throw ParameterError("shape=file needs a surface file");
    auto t = read_surface(std::filesystem::path(cfg.surface_file));
    if (t.surface.dimension() != cfg.n) throw ParameterError("surface file dimension differs from --n");
    return t.surface;
  }
  const int res = cfg.resolution > 0 ? cfg.resolution : default_resolution();
  const SphereGrid g = SphereGrid::make(cfg.n, res, cfg.mode);
  switch (cfg.shape) {
    case InitialShape::sphere: return make_sphere(g, cfg.radius);
    case InitialShape::spheroid: return make_spheroid(g, cfg.a, cfg.c);
    case InitialShape::convex: return random_convex_surface(g, cfg.seed, cfg.index);
    default: return random_star_surface(g, cfg.seed, cfg.index);
  }
}

inline Json monitors_json(const FlowMonitors& m, double t) {
  return Json{{"t", t}, {"area", m.area}, {"intH", m.int_h}, {"roundness", m.roundness}, {"M", m.decay_functional}};
}

inline CommandOutput imcf_run(const FlowConfig& cfg) {
  if (!(cfg.t_end > 0.0) || !(cfg.dt > 0.0) || cfg.sample_every < 1)
    throw ParameterError("imcf-run needs t_end > 0, dt > 0 and sample_every >= 1");
  const StarShapedSurface s0 = initial_surface(cfg);
  const FlowRun run = run_flow(s0, cfg.t_end, cfg.dt, cfg.sample_every, cfg.options);
  const VectorField field = radial_field(s0.dimension(), cfg.charge);
  const FluxChain chain = flux_chain(run.samples, field);

  CommandOutput out;
  std::ostringstream csv;
  write_flow_csv(csv, run.samples, &chain);
  out.csv = csv.str();

  double nm_min = std::numeric_limits<double>::infinity();
  for (const auto& r : run.trace) nm_min = std::min(nm_min, r.newton_maclaurin_slack);
  const double dm = max_decay_increase(run.trace);

  Json j;
  j["command"] = "imcf-run";
  j["n"] = s0.dimension();
  j["grid"] = s0.grid().describe();
  j["surface"] = s0.label();
  j["t_end"] = cfg.t_end;
  j["dt"] = cfg.dt;
  j["completed"] = run.completed();
  if (run.breakdown) j["breakdown"] = {{"time", run.breakdown->time}, {"message", run.breakdown->message}};
  else j["breakdown"] = nullptr;
  j["steps"] = static_cast<long>(run.trace.size()) - 1;
  j["initial"] = monitors_json(run.samples.front().monitors, run.samples.front().t);
  j["final"] = monitors_json(run.samples.back().monitors, run.samples.back().t);
  j["monotonicity"] = {{"max_increase", json_number(dm)},
                       {"tolerance", kMonotonicityTolerance},
                       {"verdict", dm <= kMonotonicityTolerance ? "pass" : "fail"}};
  j["newton_maclaurin"] = {{"min_slack", json_number(nm_min)},
                           {"tolerance", kNewtonMaclaurinTolerance},
                           {"verdict", nm_min >= -kNewtonMaclaurinTolerance ? "pass" : "fail"}};
  j["flux_chain"] = {{"charge", chain.charge},
                     {"worst_order_violation", json_number(chain.worst_order_violation)},
                     {"ordered", chain.ordered(kMonotonicityTolerance)},
                     {"time_integral_i0", chain.time_integral_i0},
                     {"time_integral_i1", chain.time_integral_i1},
                     {"closed_time_integral", chain.closed_time_integral},
                     {"energy_lower_bound", chain.energy_lower_bound}};
  out.document = j;
  if (run.breakdown) {
    out.exit_code = kExitFlowBreakdown;
    out.message = "flow breakdown at t=" + format_double(run.breakdown->time) + ": " + run.breakdown->message;
  }
  return out;
}

// --- verify ---------------------------------------------------------------------

struct VerifyConfig {
  std::string data_file;
  int resolution = 0;
  GridMode mode = GridMode::axisymmetric;
};

inline Json mass_json(const MassBreakdown& mb) {
  return Json{{"boundary_term", mb.boundary_term},   {"bulk_quadrature", mb.bulk_quadrature},
              {"bulk_error", mb.bulk_error},         {"bulk_tail", mb.bulk_tail},
              {"tail_exponent", mb.tail_exponent},   {"bulk_term", mb.bulk_term},
              {"total", mb.total},                   {"r_max", mb.r_max},
              {"truncation_warning", mb.truncation_warning}};
}

inline CommandOutput verify_data(const DataDefinition& def, const VerifyConfig& cfg) {
  const RadialGraphData g = build_graph(def);
  CommandOutput out;
  Json j;
  j["command"] = "verify";
  j["data"] = g.label;
  j["n"] = g.n;
  j["r_start"] = g.r_start;

  // dominant energy condition on a geometric grid out to 1e3 r_start
  const auto radii = radial_grid(g, 1e3 * g.r_start, 400);
  const auto residual = energy_condition_residual(g, radii);
  const double min_res = *std::min_element(residual.begin(), residual.end());
  const bool energy_ok = min_res >= -kEnergyConditionTolerance;
  Json ec{{"min_residual", min_res}, {"tolerance", kEnergyConditionTolerance}, {"passed", energy_ok}};
  if (!energy_ok) {
    Json prof = Json::array();
    for (std::size_t i = 0; i < radii.size(); ++i) prof.push_back({{"r", radii[i]}, {"residual", residual[i]}});
    ec["residual_profile"] = prof;
    j["energy_condition"] = ec;
    out.document = j;
    out.exit_code = kExitEnergyCondition;
    out.message = "energy condition violated: min residual " + format_double(min_res);
    return out;
  }
  j["energy_condition"] = ec;

  check_decay(g);
  const MassBreakdown mb = mass_via_formula(g);
  j["mass"] = mass_json(mb);
  try {
    const AdmLimit adm = adm_mass_limit_detail(g, {1e2 * g.r_start, 1e3 * g.r_start, 1e4 * g.r_start});
    j["adm_mass"] = {{"value", adm.value}, {"note", nullptr}};
  } catch (const ExtrapolationError& e) {
    j["adm_mass"] = {{"value", nullptr}, {"note", e.what()}};
  }

  const int res = cfg.resolution > 0 ? cfg.resolution : default_resolution();
  const SphereGrid grid = SphereGrid::make(g.n, res, cfg.mode);
  const StarShapedSurface horizon = build_horizon(def, g, grid);
  const CurvatureData cd = curvature(horizon);
  if (!(min_of(cd.mean) > 0.0)) throw ParameterError("horizon is not strictly mean convex");
  const double Q = charge_flux(horizon, cd, sample_field(horizon, build_field(def)));
  const CertificateInputs in = certificate_inputs(horizon, cd, Q, mb);
  const auto certs = theorem_certificates(in);
  j["horizon"] = {{"grid", grid.describe()},
                  {"area", in.area},
                  {"intH", in.int_h},
                  {"intR", in.int_r},
                  {"yamabe_rel", in.yamabe_rel},
                  {"charge", Q}};
  j["certificates"] = to_json(certs);
  bool all_pass = true;
  for (const auto& r : certs) all_pass = all_pass && r.verdict != Verdict::fail;
  j["all_pass"] = all_pass;
  out.document = j;
  return out;
}

inline CommandOutput verify(const VerifyConfig& cfg) {
  return verify_data(read_data_definition(cfg.data_file), cfg);
}

// --- sweep ----------------------------------------------------------------------------

struct SweepConfig {
  std::vector<int> n;
  std::vector<double> m;
  std::vector<double> q;
  int jobs = 1;
};

struct SweepRow {
  int n = 0;
  double m = 0.0, q = 0.0;
  std::string error;  // empty when the row is valid
  bool extremal = false;
  double r_plus = 0.0, r_minus = 0.0, area_radius = 0.0;
  double penrose = 0.0, penrose_lower = 0.0, penrose_upper = 0.0, positive_mass = 0.0;
  std::optional<double> embedding_height;  // u(2 r_+), absent for extremal rows
};

inline SweepRow sweep_row(int n, double m, double q) {
  SweepRow row;
  row.n = n;
  row.m = m;
  row.q = q;
  try {
    const RntParams p(n, m, q);
    const HorizonRadii h = horizon_radii(p);
    const double area = omega(n) * std::pow(h.r_plus, n - 1.0);
    row.extremal = h.extremal;
    row.r_plus = h.r_plus;
    row.r_minus = h.r_minus;
    row.area_radius = area_radius(area, n);
    const auto reps = penrose_report(m, area, q, n);
    row.penrose = find_report(reps, "penrose")->slack;
    row.penrose_lower = find_report(reps, "penrose-lower")->slack;
    row.penrose_upper = find_report(reps, "penrose-upper")->slack;
    row.positive_mass = find_report(reps, "positive-mass")->slack;
    if (!h.extremal) row.embedding_height = embed_profile(p, {2.0 * h.r_plus}).front();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

inline std::vector<SweepRow> sweep_rows(const SweepConfig& cfg) {
  if (cfg.n.empty() || cfg.m.empty() || cfg.q.empty()) throw ParameterError("sweep parameter grid is empty");
  if (cfg.jobs < 1) throw ParameterError("--jobs must be >= 1");
  struct Point { int n; double m, q; };
  std::vector<Point> pts;
  for (int n : cfg.n)
    for (double m : cfg.m)
      for (double q : cfg.q) pts.push_back({n, m, q});
  std::vector<SweepRow> rows(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pts.size();) rows[i] = sweep_row(pts[i].n, pts[i].m, pts[i].q);
  };
  const int threads = std::min<int>(cfg.jobs, static_cast<int>(pts.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "n,m,q,status,extremal,r_plus,r_minus,area_radius,penrose_slack,penrose_lower_slack,"
        "penrose_upper_slack,positive_mass_slack,embedding_height,error\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.m) << ',' << format_double(r.q) << ',';
    if (!r.error.empty()) {
      os << "error,,,,,,,,,," << csv_quote(r.error) << '\n';
      continue;
    }
    os << "ok," << (r.extremal ? "true" : "false") << ',' << format_double(r.r_plus) << ','
       << format_double(r.r_minus) << ',' << format_double(r.area_radius) << ',' << format_double(r.penrose) << ','
       << format_double(r.penrose_lower) << ',' << format_double(r.penrose_upper) << ','
       << format_double(r.positive_mass) << ','
       << (r.embedding_height ? format_double(*r.embedding_height) : std::string("n/a")) << ",\n";
  }
  return os.str();
}

}  // namespace cpl
