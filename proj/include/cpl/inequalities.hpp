#pragma once

// Named inequality certificates. Every report is oriented so that
// slack = lhs - rhs >= 0 means the inequality holds.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpl/constants.hpp"
#include "cpl/graph_data.hpp"
#include "cpl/surface.hpp"

namespace cpl {

enum class Verdict { pass, fail, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "not_applicable";
  }
}

inline constexpr double kClosedFormTolerance = 1e-10;
inline constexpr double kQuadratureTolerance = 1e-6;

/// Tolerance for quantities computed by surface quadrature: 1e-8 at 128 polar
/// nodes, growing like N^-2 on coarser grids.
inline double surface_tolerance(const SphereGrid& g) {
  const double ratio = 128.0 / g.polar_count();
  return 1e-8 * std::max(1.0, ratio * ratio);
}

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;  // absolute, already scaled by the magnitude of the sides
  std::string tolerance_source;
  Verdict verdict = Verdict::pass;
  bool saturated = false;
  std::string inputs_digest;
  std::string note;

  bool applicable() const { return verdict != Verdict::not_applicable; }
  bool passed() const { return verdict == Verdict::pass; }
};

// --- digests ---------------------------------------------------------------

/// FNV-1a (64-bit) over a byte string, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Accumulates named inputs into a canonical string for hashing.
class DigestBuilder {
 public:
  DigestBuilder& add(const std::string& key, double v) {
    text_ += key + "=" + format_double(v) + ";";
    return *this;
  }
  DigestBuilder& add(const std::string& key, const std::string& v) {
    text_ += key + "=" + v + ";";
    return *this;
  }
  std::string hex() const { return fnv1a_hex(text_); }

 private:
  std::string text_;
};

// --- construction ------------------------------------------------------------

inline InequalityReport make_report(std::string name, double lhs, double rhs, double rel_tol, std::string source,
                                    std::string digest) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tolerance = rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  r.tolerance_source = std::move(source);
  r.verdict = (r.slack >= -r.tolerance) ? Verdict::pass : Verdict::fail;
  if (!std::isfinite(r.slack)) r.verdict = Verdict::fail;
  r.saturated = std::abs(r.slack) < r.tolerance;
  r.inputs_digest = std::move(digest);
  return r;
}

inline InequalityReport not_applicable(InequalityReport r, std::string why) {
  r.verdict = Verdict::not_applicable;
  r.saturated = false;
  r.note = std::move(why);
  return r;
}

/// Penrose inequality m >= (R + Q^2 / R) / 2 with R = (|Sigma| / omega)^{(n-2)/(n-1)},
/// the positive mass inequality m >= |Q|, and, when m >= |Q|, the equivalent
/// two-sided form m - sqrt(m^2 - Q^2) <= R <= m + sqrt(m^2 - Q^2).
inline std::vector<InequalityReport> penrose_report(double mass, double horizon_area, double charge, int n,
                                                    double rel_tol = kClosedFormTolerance,
                                                    const std::string& source = "closed-form") {
  require_dimension(n);
  if (!(horizon_area > 0.0)) throw ParameterError("horizon area must be positive");
  const std::string digest =
      DigestBuilder().add("mass", mass).add("area", horizon_area).add("Q", charge).add("n", n).hex();
  const double R = area_radius(horizon_area, n);
  std::vector<InequalityReport> out;
  out.push_back(make_report("penrose", mass, 0.5 * (R + charge * charge / R), rel_tol, source, digest));
  if (mass >= std::abs(charge)) {
    const double s = std::sqrt(std::max(0.0, (mass - charge) * (mass + charge)));
    out.push_back(make_report("penrose-lower", R, mass - s, rel_tol, source, digest));
    out.push_back(make_report("penrose-upper", mass + s, R, rel_tol, source, digest));
  }
  out.push_back(make_report("positive-mass", mass, std::abs(charge), rel_tol, source, digest));
  return out;
}

// --- theorem certificates -------------------------------------------------------

/// Quantities the certificates are built from.
struct CertificateInputs {
  int n = 3;
  double area = 0.0;          // |Sigma_0|
  double int_h = 0.0;         // int H over Sigma_0
  double int_r = 0.0;         // int R_k over Sigma_0
  double min_r = 0.0;         // min of R_k over the nodes (2-convexity check)
  double yamabe_rel = 1.0;    // relative Yamabe quotient
  double charge = 0.0;        // Q
  double bulk = 0.0;          // c_n int Theta R_g dM
  double mass = 0.0;          // c_n int H + bulk
  double surface_tol = 1e-8;  // relative tolerance of surface quadrature
  double mass_tol = kQuadratureTolerance;
  std::string digest;
};

inline CertificateInputs certificate_inputs(const StarShapedSurface& horizon, const CurvatureData& cd,
                                            double charge, const MassBreakdown& mb) {
  CertificateInputs in;
  in.n = horizon.dimension();
  in.area = area(cd);
  in.int_h = total_mean_curvature(cd);
  in.int_r = total_intrinsic_curvature(cd);
  in.min_r = min_of(cd.intrinsic_r);
  in.yamabe_rel = yamabe_quotients(horizon, cd).rel;
  in.charge = charge;
  in.bulk = mb.bulk_term;
  // the horizon term comes from the actual surface; a round horizon reproduces mb.boundary_term
  in.mass = mass_constant(in.n) * in.int_h + mb.bulk_term;
  in.surface_tol = surface_tolerance(horizon.grid());
  in.mass_tol = std::max(kQuadratureTolerance, in.surface_tol);
  in.digest = DigestBuilder()
                  .add("n", in.n)
                  .add("grid", horizon.grid().describe())
                  .add("area", in.area)
                  .add("intH", in.int_h)
                  .add("intR", in.int_r)
                  .add("Q", in.charge)
                  .add("bulk", in.bulk)
                  .hex();
  return in;
}

inline std::vector<InequalityReport> theorem_certificates(const CertificateInputs& in) {
  const int n = in.n;
  const double cn = mass_constant(n);
  const double x = 2.0 * cn * in.int_h;  // 2 c_n int H
  const double R = area_radius(in.area, n);
  const double Q = in.charge, Q2 = Q * Q;
  const double y = in.yamabe_rel;
  const std::string quad_src = "quadrature";
  const std::string surf_src = "surface-resolution";
  const bool two_convex = in.min_r >= -in.surface_tol;
  std::vector<InequalityReport> out;

  out.push_back(make_report("mass-meancurv", in.mass, 0.5 * (x + Q2 / x), in.mass_tol, quad_src, in.digest));
  out.push_back(make_report("positive-mass", in.mass, std::abs(Q), in.mass_tol, quad_src, in.digest));
  out.push_back(make_report("af-meancurv", x, R, in.surface_tol, surf_src, in.digest));
  if (n >= 4) {
    auto r = make_report("af-scalar", in.int_r,
                         af_scalar_constant(n) * std::pow(in.int_h, (n - 3.0) / (n - 2.0)), in.surface_tol,
                         surf_src, in.digest);
    out.push_back(two_convex ? r : not_applicable(r, "horizon is not 2-convex (R_k < 0 at some node)"));
  }
  auto gate = make_report("yamabe-gate", 1.0, y, in.surface_tol, surf_src, in.digest);
  const bool gate_open = gate.passed();
  if (!gate_open) gate = not_applicable(gate, "relative Yamabe quotient exceeds 1");
  out.push_back(gate);
  out.push_back(make_report("gibbons", y * R * R, Q2, in.surface_tol, surf_src, in.digest));

  auto pen = make_report("penrose", in.mass, 0.5 * (R + Q2 / R), in.mass_tol, quad_src, in.digest);
  out.push_back(gate_open ? pen : not_applicable(pen, "yamabe gate closed"));
  if (in.mass >= std::abs(Q)) {
    const double s = std::sqrt(std::max(0.0, (in.mass - Q) * (in.mass + Q)));
    out.push_back(make_report("penrose-upper", in.mass + s, R, in.mass_tol, quad_src, in.digest));
  }
  if (n >= 4) {
    auto r = make_report("penrose-yamabe", in.mass, 0.5 * (R + std::pow(y, -(n - 2.0) / (n - 3.0)) * Q2 / R),
                         in.mass_tol, quad_src, in.digest);
    out.push_back(two_convex ? r : not_applicable(r, "horizon is not 2-convex (R_k < 0 at some node)"));
  }
  return out;
}

/// Certificates for a horizon surface Sigma_0, graph data providing the bulk
/// term, and an electric field whose flux through Sigma_0 defines Q.
inline std::vector<InequalityReport> theorem_certificates(const StarShapedSurface& horizon,
                                                          const RadialGraphData& data, const VectorField& field) {
  if (horizon.dimension() != data.n) throw ParameterError("horizon and graph data dimensions differ");
  const CurvatureData cd = curvature(horizon);
  if (!(min_of(cd.mean) > 0.0)) throw ParameterError("horizon is not strictly mean convex");
  const MassBreakdown mb = mass_via_formula(data);
  return theorem_certificates(certificate_inputs(horizon, cd, charge_flux(horizon, cd, sample_field(horizon, field)), mb));
}

inline const InequalityReport* find_report(const std::vector<InequalityReport>& v, const std::string& name) {
  for (const auto& r : v)
    if (r.name == name) return &r;
  return nullptr;
}

// --- serialization ------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const InequalityReport& r) {
  nlohmann::ordered_json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  j["name"] = r.name;
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["slack"] = num(r.slack);
  j["tolerance"] = r.tolerance;
  j["tolerance_source"] = r.tolerance_source;
  j["verdict"] = to_string(r.verdict);
  j["saturated"] = r.saturated;
  j["inputs_digest"] = r.inputs_digest;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<InequalityReport>& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

}  // namespace cpl
