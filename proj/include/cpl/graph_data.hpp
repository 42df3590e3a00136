#pragma once

// Rotationally symmetric graphs u(r) over the exterior of a round horizon
// {r = r_start} in R^n. The induced metric is f dr^2 + r^2 h with f = 1 + u'^2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/exact_rnt.hpp"
#include "cpl/quadrature.hpp"

namespace cpl {

using RadialFunction = std::function<double(double)>;

struct RadialGraphData {
  int n = 3;
  double r_start = 1.0;
  RadialFunction slope;        // du/dr on (r_start, inf)
  RadialFunction slope_deriv;  // d^2u/dr^2
  RadialFunction field;        // E component along the unit radial normal
  std::string label;
};

// --- factories --------------------------------------------------------------

inline RadialFunction coulomb_field(int n, double charge) {
  return [n, charge](double r) { return charge / std::pow(r, n - 1.0); };
}

/// Graph realization of the RNT slice; the electric field is the RNT field
/// scaled by `field_scale`.
inline RadialGraphData rnt_graph(const RntParams& p, double field_scale = 1.0) {
  rnt_detail::require_embeddable(p);
  RadialGraphData d;
  d.n = p.n;
  d.r_start = horizon_radii(p).r_plus;
  d.slope = [p](double r) { return embedding_slope(p, r); };
  d.slope_deriv = [p](double r) { return embedding_slope_derivative(p, r); };
  d.field = coulomb_field(p.n, field_scale * p.q);
  d.label = "rnt " + p.describe();
  return d;
}

/// RNT slope plus amplitude * exp(-(r - r_+) / width).
inline RadialGraphData perturbed_rnt_graph(const RntParams& p, double amplitude, double width,
                                           double field_scale = 1.0) {
  if (!(width > 0.0)) throw ParameterError("perturbation width must be positive");
  if (!std::isfinite(amplitude)) throw ParameterError("perturbation amplitude must be finite");
  RadialGraphData d = rnt_graph(p, field_scale);
  const double r0 = d.r_start;
  d.slope = [p, amplitude, width, r0](double r) {
    return embedding_slope(p, r) + amplitude * std::exp(-(r - r0) / width);
  };
  d.slope_deriv = [p, amplitude, width, r0](double r) {
    return embedding_slope_derivative(p, r) - amplitude / width * std::exp(-(r - r0) / width);
  };
  std::ostringstream os;
  os.precision(17);
  os << "rnt-perturbed " << p.describe() << " amplitude=" << amplitude << " width=" << width;
  d.label = os.str();
  return d;
}

/// u = 0: the flat slice outside a coordinate sphere (not a horizon).
inline RadialGraphData flat_graph(int n, double r_start) {
  require_dimension(n);
  if (!(r_start > 0.0)) throw ParameterError("r_start must be positive");
  RadialGraphData d;
  d.n = n;
  d.r_start = r_start;
  d.slope = [](double) { return 0.0; };
  d.slope_deriv = [](double) { return 0.0; };
  d.field = [](double) { return 0.0; };
  d.label = "flat";
  return d;
}

/// Tabulated slope. psi^2 = 1 / (1 + u'^2) is interpolated by a monotone cubic
/// (PCHIP) with psi^2(r_start) = 0 prepended when the table starts later. Past
/// the last node u'^2 continues as a x + b x^2, x = r^{-(n-2)}, fitted to the
/// last two nodes (the asymptotically flat expansion); if that fit is not
/// positive, as a power law through the same nodes.
inline RadialGraphData table_graph(int n, double r_start, std::vector<double> r, std::vector<double> dudr,
                                   double charge, std::string label = "table") {
  require_dimension(n);
  if (r.size() != dudr.size()) throw ParameterError("table columns differ in length");
  if (r.size() < 3) throw ParameterError("table needs at least 3 rows");
  if (!(r_start > 0.0)) throw ParameterError("r_start must be positive");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= r_start)) throw ParameterError("table radii must be >= r_start");
    if (i > 0 && !(r[i] > r[i - 1])) throw ParameterError("table radii must be strictly increasing");
    if (!(dudr[i] > 0.0) || !std::isfinite(dudr[i])) throw ParameterError("table slopes must be positive and finite");
  }
  std::vector<double> x, y;
  if (r.front() > r_start) {
    x.push_back(r_start);
    y.push_back(0.0);
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    x.push_back(r[i]);
    y.push_back(1.0 / (1.0 + dudr[i] * dudr[i]));
  }
  const double r_last = r.back(), r_prev = r[r.size() - 2];
  const double w_last = dudr.back() * dudr.back();
  const double w_prev = dudr[dudr.size() - 2] * dudr[dudr.size() - 2];
  // w = a x + b x^2 through both nodes
  const double k = n - 2.0;
  const double x1 = std::pow(r_prev, -k), x2 = std::pow(r_last, -k);
  const double b = (w_last / x2 - w_prev / x1) / (x2 - x1);
  const double a = w_last / x2 - b * x2;
  const bool af_tail = a > 0.0 && a + 2.0 * b * x2 > 0.0;
  const double sigma = std::log(w_prev / w_last) / std::log(r_last / r_prev);
  auto tail = [af_tail, a, b, k, r_last, w_last, sigma](double rr) -> std::pair<double, double> {
    if (af_tail) {
      const double x = std::pow(rr, -k);
      return {a * x + b * x * x, -(a + 2.0 * b * x) * k * x / rr};
    }
    const double w = w_last * std::pow(rr / r_last, -sigma);
    return {w, -sigma * w / rr};
  };
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(y));

  RadialGraphData d;
  d.n = n;
  d.r_start = r_start;
  d.slope = [spline, r_last, tail](double rr) {
    if (rr >= r_last) return std::sqrt(tail(rr).first);
    const double p2 = (*spline)(rr);
    return std::sqrt(1.0 / p2 - 1.0);
  };
  d.slope_deriv = [spline, r_last, tail](double rr) {
    if (rr >= r_last) {
      const auto [w, dw] = tail(rr);
      return dw / (2.0 * std::sqrt(w));
    }
    const double p2 = (*spline)(rr);
    const double dp2 = spline->prime(rr);
    const double w = 1.0 / p2 - 1.0;
    const double dw = -dp2 / (p2 * p2);
    return dw / (2.0 * std::sqrt(w));
  };
  d.field = coulomb_field(n, charge);
  d.label = std::move(label);
  return d;
}

// --- pointwise geometry -------------------------------------------------------

namespace graph_detail {

inline void require_exterior(const RadialGraphData& d, double r) {
  if (!(r > d.r_start)) throw DomainError("graph quantities require r > r_start");
}

// h = 1 - 1/f = w / (1 + w) and h' = w' / (1 + w)^2 with w = u'^2.
inline std::pair<double, double> h_and_derivative(const RadialGraphData& d, double r) {
  const double s = d.slope(r);
  const double w = s * s;
  if (std::isinf(w)) return {1.0, 0.0};
  const double ds = d.slope_deriv(r);
  const double onep = 1.0 + w;
  return {w / onep, 2.0 * s * ds / (onep * onep)};
}

}  // namespace graph_detail

/// f = 1 + (du/dr)^2.
inline double induced_metric_factor(const RadialGraphData& d, double r) {
  graph_detail::require_exterior(d, r);
  const double s = d.slope(r);
  return 1.0 + s * s;
}

/// Scalar curvature of f dr^2 + r^2 h:
///   R = (n-1) [ (n-2) (1 - 1/f) + r (1 - 1/f)' ] / r^2.
inline double graph_scalar_curvature(const RadialGraphData& d, double r) {
  graph_detail::require_exterior(d, r);
  const auto [h, dh] = graph_detail::h_and_derivative(d, r);
  return (d.n - 1.0) * ((d.n - 2.0) * h + r * dh) / (r * r);
}

/// R_g - (n-1)(n-2)|E|^2_g at each radius.
inline std::vector<double> energy_condition_residual(const RadialGraphData& d, const std::vector<double>& radii) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const double e = d.field(r);
    out.push_back(graph_scalar_curvature(d, r) - (d.n - 1.0) * (d.n - 2.0) * e * e);
  }
  return out;
}

/// (1 / omega) int_{S_r} <E, nu> = E(r) r^{n-1}.
inline double charge_from_field(const RadialGraphData& d, double r) {
  graph_detail::require_exterior(d, r);
  return d.field(r) * std::pow(r, d.n - 1.0);
}

/// Radii spaced geometrically from just outside r_start to r_max.
inline std::vector<double> radial_grid(const RadialGraphData& d, double r_max, int count) {
  if (count < 2 || !(r_max > d.r_start)) throw ParameterError("radial grid needs count >= 2 and r_max > r_start");
  std::vector<double> r(count);
  const double a = std::log(d.r_start * (1.0 + 1e-6)), b = std::log(r_max);
  for (int i = 0; i < count; ++i) r[i] = std::exp(a + (b - a) * i / (count - 1.0));
  return r;
}

// --- decay ---------------------------------------------------------------------

struct DecayReport {
  double sigma = 0.0;     // measured exponent of (du/dr)^2 = O(r^-sigma)
  double required = 0.0;  // (n-2)/2
};

/// Measures sigma from (du/dr)^2 between 10^3 and 10^4 r_start and throws
/// DecayError unless sigma > (n-2)/2.
inline DecayReport check_decay(const RadialGraphData& d) {
  DecayReport rep;
  rep.required = 0.5 * (d.n - 2.0);
  const double r1 = 1e3 * d.r_start, r2 = 1e4 * d.r_start;
  const double s1 = d.slope(r1), s2 = d.slope(r2);
  const double w1 = s1 * s1, w2 = s2 * s2;
  if (!std::isfinite(w1) || !std::isfinite(w2)) throw DecayError("slope is not finite in the asymptotic region");
  if (w2 == 0.0) {
    rep.sigma = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.sigma = std::log(w1 / w2) / std::log(r2 / r1);
  if (!(rep.sigma > rep.required)) {
    std::ostringstream os;
    os.precision(6);
    os << "data is not asymptotically flat: (du/dr)^2 decays like r^-" << rep.sigma << ", need sigma > "
       << rep.required;
    throw DecayError(os.str());
  }
  return rep;
}

// --- mass ------------------------------------------------------------------------

struct MassBreakdown {
  double boundary_term = 0.0;    // c_n int_{Sigma_0} H
  double bulk_quadrature = 0.0;  // c_n int_{r_start}^{r_max} Theta R_g dM
  double bulk_error = 0.0;       // quadrature error estimate
  double bulk_tail = 0.0;        // estimate of the part beyond r_max
  double tail_exponent = 0.0;    // measured decay exponent of the radial integrand
  double bulk_term = 0.0;        // bulk_quadrature + bulk_tail
  double total = 0.0;
  double dec_residual_min = 0.0;
  double r_max = 0.0;
  bool truncation_warning = false;
};

/// c_n int_{Sigma_0} H for the round horizon, H = (n-1)/r_start. The formula
/// asks for H with respect to the normal pointing into the horizon's interior
/// side of the slice; for the round sphere about the origin this is the
/// positive value (n-1)/r_start used here.
inline double round_horizon_term(int n, double r_start) {
  return mass_constant(n) * (n - 1.0) * omega(n) * std::pow(r_start, n - 2.0);
}

/// Bulk integrand of the mass formula per unit radius: Theta R_g dM reduces to
/// R_g dOmega on a graph, so this is c_n omega R_g(r) r^{n-1}.
inline double mass_bulk_density(const RadialGraphData& d, double r) {
  return mass_constant(d.n) * omega(d.n) * graph_scalar_curvature(d, r) * std::pow(r, d.n - 1.0);
}

/// Mass integral formula for a graph over the exterior of a round horizon.
/// [r_start, 2 r_start] is integrated in s = sqrt(r - r_start), the rest in
/// log r; the tail past r_max assumes the integrand decays like r^-p with p
/// measured at r_max / 2 and r_max.
inline MassBreakdown mass_via_formula(const RadialGraphData& d, double r_max = 0.0, double tolerance = 1e-6) {
  check_decay(d);
  const double r0 = d.r_start;
  if (r_max == 0.0) r_max = 1e4 * r0;
  if (!(r_max > 2.0 * r0)) throw ParameterError("r_max must exceed 2 r_start");
  MassBreakdown mb;
  mb.r_max = r_max;
  mb.boundary_term = round_horizon_term(d.n, r0);

  auto near = [&](double s) {
    if (s == 0.0) return 0.0;
    // the integrand is bounded; nodes closer than one ulp sample the next double
    const double r = std::max(r0 + s * s, std::nextafter(r0, std::numeric_limits<double>::infinity()));
    return mass_bulk_density(d, r) * 2.0 * s;
  };
  auto far = [&](double y) {
    const double r = std::exp(y);
    return mass_bulk_density(d, r) * r;
  };
  const double abs_tol = 1e-3 * tolerance;
  const auto a = quad::integrate(near, 0.0, std::sqrt(r0), 1e-12, abs_tol);
  const auto b = quad::integrate(far, std::log(2.0 * r0), std::log(r_max), 1e-12, abs_tol);
  mb.bulk_quadrature = a.value + b.value;
  mb.bulk_error = a.error + b.error;

  const double g1 = mass_bulk_density(d, 0.5 * r_max), g2 = mass_bulk_density(d, r_max);
  if (g2 != 0.0 && g1 / g2 > 1.0) {
    mb.tail_exponent = std::log(g1 / g2) / std::log(2.0);
    if (mb.tail_exponent > 1.0) mb.bulk_tail = g2 * r_max / (mb.tail_exponent - 1.0);
  }
  // no usable power law: only a problem when the integrand is not negligible there
  if (!(mb.tail_exponent > 1.0) && std::abs(g2) * r_max > tolerance) mb.truncation_warning = true;
  if (std::abs(mb.bulk_tail) > tolerance) mb.truncation_warning = true;
  mb.bulk_term = mb.bulk_quadrature + mb.bulk_tail;
  mb.total = mb.boundary_term + mb.bulk_term;

  const auto res = energy_condition_residual(d, radial_grid(d, r_max, 400));
  mb.dec_residual_min = *std::min_element(res.begin(), res.end());
  return mb;
}

// --- ADM flux ------------------------------------------------------------------------

/// c_n int_{S_r} (div e - d tr e)(nu_r) with e_ij = (f - 1) x_i x_j / r^2, which
/// evaluates to (f - 1) r^{n-2} / 2 = u'^2 r^{n-2} / 2.
inline double adm_flux(const RadialGraphData& d, double r) {
  graph_detail::require_exterior(d, r);
  const double s = d.slope(r);
  return 0.5 * s * s * std::pow(r, d.n - 2.0);
}

struct AdmLimit {
  double value = 0.0;
  std::vector<double> estimates;  // successive Neville diagonal entries
};

/// Polynomial (Richardson/Neville) extrapolation of the flux to x = 0 in the
/// variable x = r^{-(n-2)}. Throws ExtrapolationError when the corrections
/// grow instead of shrinking.
inline AdmLimit adm_mass_limit_detail(const RadialGraphData& d, std::vector<double> radii) {
  if (radii.size() < 2) throw ParameterError("ADM extrapolation needs at least two radii");
  std::sort(radii.begin(), radii.end());
  if (std::adjacent_find(radii.begin(), radii.end()) != radii.end())
    throw ParameterError("ADM extrapolation radii must be distinct");
  const std::size_t k = radii.size();
  std::vector<double> x(k), t(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::pow(radii[i], -(d.n - 2.0));
    t[i] = adm_flux(d, radii[i]);
    if (!std::isfinite(t[i])) throw ExtrapolationError("ADM flux is not finite");
  }
  AdmLimit out;
  out.estimates.push_back(t[0]);
  // Neville tableau at x = 0, adding one radius at a time
  std::vector<double> p = t;
  for (std::size_t level = 1; level < k; ++level) {
    for (std::size_t i = k - 1; i >= level; --i) {
      p[i] = (x[i - level] * p[i] - x[i] * p[i - 1]) / (x[i - level] - x[i]);
      if (i == level) break;
    }
    out.estimates.push_back(p[level]);
  }
  // estimates[j] uses radii[0..j]
  for (std::size_t j = 2; j < out.estimates.size(); ++j) {
    const double prev = std::abs(out.estimates[j - 1] - out.estimates[j - 2]);
    const double cur = std::abs(out.estimates[j] - out.estimates[j - 1]);
    const double scale = 1e-12 * std::max(1.0, std::abs(out.estimates[j]));
    if (cur > prev && cur > scale) {
      std::ostringstream os;
      os.precision(17);
      os << "ADM extrapolation unstable: corrections grow (" << prev << " -> " << cur << ")";
      throw ExtrapolationError(os.str());
    }
  }
  out.value = out.estimates.back();
  if (!std::isfinite(out.value)) throw ExtrapolationError("ADM extrapolation produced a non-finite value");
  return out;
}

inline double adm_mass_limit(const RadialGraphData& d, const std::vector<double>& radii) {
  return adm_mass_limit_detail(d, radii).value;
}

}  // namespace cpl
