#pragma once

// Closed-form Reissner-Nordstrom-Tangherlini (RNT) data: the static charged
// black hole in n+1 spacetime dimensions, restricted to its time-symmetric
// slice g = psi^{-2} dr^2 + r^2 h on [r_+, infinity).

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/quadrature.hpp"

namespace cpl {

struct RntParams {
  int n = 3;
  double m = 1.0;
  double q = 0.0;

  RntParams() = default;
  RntParams(int dim, double mass, double charge) : n(dim), m(mass), q(charge) {
    require_dimension(n);
    if (!std::isfinite(m) || !std::isfinite(q)) throw ParameterError("m and q must be finite");
  }

  bool has_horizon() const { return m >= std::abs(q); }
  bool extremal() const { return m == std::abs(q); }
  double omega() const { return cpl::omega(n); }
  double mass_constant() const { return cpl::mass_constant(n); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "n=" << n << " m=" << m << " q=" << q;
    return os.str();
  }
};

inline void require_horizon(const RntParams& p) {
  if (!p.has_horizon()) {
    throw ParameterError("naked singularity regime: m < |q| (" + p.describe() + ")");
  }
}

namespace rnt_detail {

inline double relative_log1p(double t) { return t == 0.0 ? 1.0 : std::log1p(t) / t; }
inline double relative_expm1(double y) { return y == 0.0 ? 1.0 : std::expm1(y) / y; }

// m +/- sqrt(m^2 - q^2), i.e. r_pm^{n-2}.
inline double horizon_power_plus(const RntParams& p) {
  return p.m + std::sqrt((p.m - p.q) * (p.m + p.q));
}
inline double horizon_power_minus(const RntParams& p) {
  // (m - s) = q^2 / (m + s) avoids cancellation when q is small.
  const double plus = horizon_power_plus(p);
  return plus > 0.0 ? p.q * p.q / plus : 0.0;
}

}  // namespace rnt_detail

struct HorizonRadii {
  double r_minus = 0.0;
  double r_plus = 0.0;
  bool extremal = false;
};

/// Roots r_pm = (m +/- sqrt(m^2 - q^2))^{1/(n-2)} of psi^2. Extremal inputs
/// (m = |q|) are accepted and flagged.
inline HorizonRadii horizon_radii(const RntParams& p) {
  require_horizon(p);
  const double e = 1.0 / (p.n - 2.0);
  HorizonRadii h;
  h.r_plus = std::pow(rnt_detail::horizon_power_plus(p), e);
  h.r_minus = p.extremal() ? h.r_plus : std::pow(rnt_detail::horizon_power_minus(p), e);
  h.extremal = p.extremal();
  return h;
}

/// psi^2 = 1 - 2m/r^{n-2} + q^2/r^{2n-4}. When horizons exist it is evaluated
/// in the factored form (1 - r_+^{n-2}/r^{n-2})(1 - r_-^{n-2}/r^{n-2}) so that it
/// vanishes exactly at the horizon.
inline double lapse_squared(const RntParams& p, double r) {
  if (!(r > 0.0)) throw ParameterError("lapse requires r > 0");
  const double x = std::pow(r, p.n - 2.0);
  if (p.has_horizon()) {
    const double a = rnt_detail::horizon_power_plus(p);
    const double b = p.extremal() ? a : rnt_detail::horizon_power_minus(p);
    return (1.0 - a / x) * (1.0 - b / x);
  }
  return 1.0 - 2.0 * p.m / x + p.q * p.q / (x * x);
}

inline double lapse(const RntParams& p, double r) {
  const double s = lapse_squared(p, r);
  if (s < 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "lapse radicand negative at r=" << r << " (between the horizons, " << p.describe() << ")";
    throw DomainError(os.str());
  }
  return std::sqrt(s);
}

/// Mass of the RNT solution whose horizon has the given area and charge q.
inline double mass_from_horizon(double area, double q, int n) {
  require_dimension(n);
  if (!(area > 0.0)) throw ParameterError("horizon area must be positive");
  const double ratio = std::pow(area / omega(n), (n - 2.0) / (n - 1.0));
  return 0.5 * (ratio + q * q / ratio);
}

/// Scalar curvature (n-1)(n-2) q^2 / r^{2n-2} of the time-symmetric slice.
/// Evaluated for any r > 0; physically meaningful on r >= r_+.
inline double rnt_scalar_curvature(const RntParams& p, double r) {
  if (!(r > 0.0)) throw ParameterError("scalar curvature requires r > 0");
  return (p.n - 1.0) * (p.n - 2.0) * p.q * p.q / std::pow(r, 2.0 * p.n - 2.0);
}

/// Component q / r^{n-1} of E along the unit radial normal; also |E|_g.
inline double electric_field_radial(const RntParams& p, double r) {
  if (!(r > 0.0)) throw ParameterError("electric field requires r > 0");
  return p.q / std::pow(r, p.n - 1.0);
}

// --- Isometric embedding as a radial graph u(r) in R^{n+1} -----------------

namespace rnt_detail {

inline void require_embeddable(const RntParams& p) {
  require_horizon(p);
  if (p.extremal()) {
    throw ParameterError("embedding requires m > |q|; extremal data (m = |q|) has a degenerate horizon");
  }
}

// r^{n-2} - r_+^{n-2} for r = r_+ + d, accurate for small d.
inline double power_gap(const RntParams& p, double r_plus, double d) {
  const double k = p.n - 2.0;
  const double t = d / r_plus;
  return std::pow(r_plus, k) * std::expm1(k * std::log1p(t));
}

// (r^{n-2} - r_+^{n-2}) / d for r = r_+ + d; finite limit k r_+^{k-1} at d = 0.
inline double power_gap_quotient(const RntParams& p, double r_plus, double d) {
  const double k = p.n - 2.0;
  const double t = d / r_plus;
  const double y = k * std::log1p(t);
  return std::pow(r_plus, k - 1.0) * k * relative_log1p(t) * relative_expm1(y);
}

}  // namespace rnt_detail

/// (du/dr)^2 = (2m r^{n-2} - q^2) / (r^{2n-4} - 2m r^{n-2} + q^2) for r > r_+.
inline double embedding_slope_squared(const RntParams& p, double r) {
  rnt_detail::require_embeddable(p);
  const double rp = horizon_radii(p).r_plus;
  if (!(r > rp)) throw DomainError("embedding slope requires r > r_+");
  const double x = std::pow(r, p.n - 2.0);
  const double num = 2.0 * p.m * x - p.q * p.q;
  const double gap = rnt_detail::power_gap(p, rp, r - rp);
  const double inner = x - rnt_detail::horizon_power_minus(p);
  return num / (gap * inner);
}

inline double embedding_slope(const RntParams& p, double r) {
  return std::sqrt(embedding_slope_squared(p, r));
}

/// d^2u/dr^2 from the quotient rule applied to (du/dr)^2 = N / D.
inline double embedding_slope_derivative(const RntParams& p, double r) {
  const double w = embedding_slope_squared(p, r);
  const double k = p.n - 2.0;
  const double x = std::pow(r, k);
  const double dx = k * std::pow(r, k - 1.0);
  const double num = 2.0 * p.m * x - p.q * p.q;
  const double rp = horizon_radii(p).r_plus;
  const double den = rnt_detail::power_gap(p, rp, r - rp) * (x - rnt_detail::horizon_power_minus(p));
  // w' = (N' D - N D') / D^2 = w (N'/N - D'/D), D' = (2x - 2m) x'
  const double dw = w * (2.0 * p.m * dx / num - (2.0 * x - 2.0 * p.m) * dx / den);
  return dw / (2.0 * std::sqrt(w));
}

/// u(r) with u(r_+) = 0. Each segment is integrated in s = sqrt(r - r_+), where
/// the integrand 2 s du/dr is bounded and smooth up to the horizon.
inline std::vector<double> embed_profile(const RntParams& p, const std::vector<double>& r_values) {
  rnt_detail::require_embeddable(p);
  const double rp = horizon_radii(p).r_plus;
  const double x_minus = rnt_detail::horizon_power_minus(p);
  const double qq = p.q * p.q;

  auto integrand = [&](double s) {
    const double d = s * s;
    const double r = rp + d;
    const double x = std::pow(r, p.n - 2.0);
    const double num = 2.0 * p.m * x - qq;
    const double den = rnt_detail::power_gap_quotient(p, rp, d) * (x - x_minus);
    return 2.0 * std::sqrt(num / den);
  };

  std::vector<double> u;
  u.reserve(r_values.size());
  double prev_s = 0.0;
  double acc = 0.0;
  double prev_r = rp;
  for (double r : r_values) {
    if (r < rp * (1.0 - 1e-14)) throw ParameterError("embed_profile radii must be >= r_+");
    if (r < prev_r) throw ParameterError("embed_profile radii must be increasing");
    const double s = std::sqrt(std::max(r - rp, 0.0));
    if (s > prev_s) acc += quad::integrate(integrand, prev_s, s, 1e-13, 0.0, 12).value;
    u.push_back(acc);
    prev_s = s;
    prev_r = r;
  }
  return u;
}

}  // namespace cpl
