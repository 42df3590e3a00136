#pragma once

// Star-shaped hypersurfaces Sigma = { rho(omega) omega } in R^n and their
// curvature. Mean curvature is taken with respect to the outward normal, so
// convex surfaces have H > 0.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/sphere_grid.hpp"

namespace cpl {

class StarShapedSurface {
 public:
  StarShapedSurface(SphereGrid grid, std::vector<double> rho, std::string label = {})
      : grid_(std::move(grid)), rho_(std::move(rho)), label_(std::move(label)) {
    if (rho_.size() != grid_.size()) throw ParameterError("radial function size does not match the grid");
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      if (!(rho_[i] > 0.0) || !std::isfinite(rho_[i])) {
        throw ParameterError("surface is not star-shaped: rho <= 0 at node " + std::to_string(i));
      }
    }
  }

  const SphereGrid& grid() const { return grid_; }
  std::span<const double> rho() const { return rho_; }
  const std::string& label() const { return label_; }
  int dimension() const { return grid_.dimension(); }
  std::size_t size() const { return rho_.size(); }

  Vec3 position(std::size_t i) const {
    auto d = grid_.direction(i);
    return {rho_[i] * d[0], rho_[i] * d[1], rho_[i] * d[2]};
  }

  StarShapedSurface relabeled(std::string label) const { return {grid_, rho_, std::move(label)}; }

 private:
  SphereGrid grid_;
  std::vector<double> rho_;
  std::string label_;
};

/// Per-node curvature of a star-shaped surface.
struct CurvatureData {
  std::vector<double> mean;          // H, sum of principal curvatures
  std::vector<double> norm_sq_a;     // |A|^2
  std::vector<double> extrinsic_k;   // K = (H^2 - |A|^2) / 2
  std::vector<double> intrinsic_r;   // scalar curvature R_k of the induced metric
  std::vector<double> area_element;  // dA quadrature weight
  std::vector<Vec3> normal;          // outward unit normal, reduced coordinates
  std::vector<double> radial_speed;  // |X_rho| / <nu, omega>, i.e. W / rho

  std::size_t size() const { return mean.size(); }
};

/// Surface with a radial function given pointwise on directions.
inline StarShapedSurface make_surface(const SphereGrid& grid, const std::function<double(const Vec3&)>& radius,
                                      std::string label = {}) {
  std::vector<double> rho(grid.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = radius(grid.direction(i));
  return {grid, std::move(rho), std::move(label)};
}

inline StarShapedSurface make_sphere(const SphereGrid& grid, double radius) {
  if (!(radius > 0.0)) throw ParameterError("sphere radius must be positive");
  return {grid, std::vector<double>(grid.size(), radius), "sphere"};
}

/// Ellipsoid of revolution with equatorial semi-axis a and polar semi-axis c
/// (symmetry axis is z in both grid modes).
inline StarShapedSurface make_spheroid(const SphereGrid& grid, double a, double c) {
  if (!(a > 0.0) || !(c > 0.0)) throw ParameterError("spheroid semi-axes must be positive");
  const bool axi = grid.mode() == GridMode::axisymmetric;
  return make_surface(
      grid,
      [&](const Vec3& w) {
        const double z = axi ? w[0] : w[2];
        const double s2 = std::max(0.0, 1.0 - z * z);
        return 1.0 / std::sqrt(z * z / (c * c) + s2 / (a * a));
      },
      "spheroid");
}

namespace surface_detail {

inline void fill_common(CurvatureData& cd, std::size_t i, double h, double a2) {
  cd.mean[i] = h;
  cd.norm_sq_a[i] = a2;
  cd.extrinsic_k[i] = 0.5 * (h * h - a2);
}

inline CurvatureData axisymmetric_curvature(const StarShapedSurface& s) {
  const auto& g = s.grid();
  const int n = g.dimension();
  const double k = n - 2.0;  // multiplicity of the parallel curvature
  const auto rho = s.rho();
  const auto d = g.derivatives(rho);
  const std::size_t N = s.size();
  CurvatureData cd;
  cd.mean.resize(N);
  cd.norm_sq_a.resize(N);
  cd.extrinsic_k.resize(N);
  cd.intrinsic_r.resize(N);
  cd.area_element.resize(N);
  cd.normal.resize(N);
  cd.radial_speed.resize(N);
  const auto w = g.weights();
  for (std::size_t i = 0; i < N; ++i) {
    const double x = g.cos_polar(i), st = g.sin_polar(i);
    const double r = rho[i], rx = d.dx[i], rxx = d.dxx[i];
    const double one_m_x2 = st * st;
    const double rt = -st * rx;                        // d rho / d theta
    const double rtt = one_m_x2 * rxx - x * rx;        // d^2 rho / d theta^2
    const double len2 = r * r + rt * rt;
    const double len = std::sqrt(len2);
    if (!(len > 1e-300)) throw DegenerateMetricError("degenerate induced metric at node " + std::to_string(i));

    const double k1 = (r * r + 2.0 * rt * rt - r * rtt) / (len2 * len);  // meridian
    const double k2 = (r + x * rx) / (len * r);                            // parallels
    const double h = k1 + k * k2;
    const double a2 = k1 * k1 + k * k2 * k2;
    fill_common(cd, i, h, a2);

    // Intrinsic route: the induced metric is dl^2 + phi(l)^2 g_{S^{n-2}} with
    // phi = rho sin(theta) and dl = len dtheta.
    const double s_tt_over_sin = one_m_x2 * rxx - 3.0 * x * rx - r;
    const double s_t = x * r - one_m_x2 * rx;
    const double len_t_over_sin = -rx * (r + rtt) / len;
    const double phi_ll_over_phi = (s_tt_over_sin / len2 - s_t * len_t_over_sin / (len2 * len)) / r;
    cd.intrinsic_r[i] = -2.0 * k * phi_ll_over_phi + k * (k - 1.0) * k2 * k2;

    cd.area_element[i] = std::pow(r, n - 2.0) * len * w[i];
    cd.normal[i] = {(x * r - one_m_x2 * rx) / len, st * (r + x * rx) / len, 0.0};
    cd.radial_speed[i] = len / r;
  }
  return cd;
}

inline CurvatureData full_curvature(const StarShapedSurface& s) {
  const auto& g = s.grid();
  const auto d = g.derivatives(s.rho());
  const std::size_t N = s.size();
  CurvatureData cd;
  cd.mean.resize(N);
  cd.norm_sq_a.resize(N);
  cd.extrinsic_k.resize(N);
  cd.intrinsic_r.resize(N);
  cd.area_element.resize(N);
  cd.normal.resize(N);
  cd.radial_speed.resize(N);
  const auto w = g.weights();
  for (std::size_t i = 0; i < N; ++i) {
    const double c = g.cos_polar(i), sn = g.sin_polar(i);
    const double r = d.values[i];
    const double rt = d.dt[i], rp = d.dp[i], rtt = d.dtt[i], rtp = d.dtp[i], rpp = d.dpp[i];
    // orthonormal frame (e_r, e_theta, e_phi); phi-derivatives carry a 1/sin factor
    const double rp_s = rp / sn;
    const double W2 = r * r + rt * rt + rp_s * rp_s;
    const double W = std::sqrt(W2);
    // first fundamental form in (theta, phi_hat = sin(theta) phi) coordinates
    const double E = rt * rt + r * r;
    const double F = rt * rp_s;
    const double G = rp_s * rp_s + r * r;
    const double detI = E * G - F * F;
    if (!(detI > 1e-300)) throw DegenerateMetricError("degenerate induced metric at node " + std::to_string(i));
    // second fundamental form (outward normal, sphere positive), same coordinates
    const double L2 = (r * r + 2.0 * rt * rt - r * rtt) / W;
    const double M2 = (-r * rtp / sn + 2.0 * rt * rp_s + r * c * rp_s / sn) / W;
    const double N2 = (r * r - r * rpp / (sn * sn) - r * c / sn * rt + 2.0 * rp_s * rp_s) / W;
    // shape operator S = I^{-1} II
    const double inv = 1.0 / detI;
    const double s11 = inv * (G * L2 - F * M2);
    const double s12 = inv * (G * M2 - F * N2);
    const double s21 = inv * (E * M2 - F * L2);
    const double s22 = inv * (E * N2 - F * M2);
    const double h = s11 + s22;
    const double a2 = s11 * s11 + 2.0 * s12 * s21 + s22 * s22;
    fill_common(cd, i, h, a2);
    // n = 3: R_k = 2 det(II) / det(I) (Gauss curvature, computed from determinants)
    cd.intrinsic_r[i] = 2.0 * (L2 * N2 - M2 * M2) * inv;
    cd.area_element[i] = r * W * w[i];
    const double cp = g.cos_azimuth(i), sp = g.sin_azimuth(i);
    // nu = (r e_r - rt e_theta - rp_s e_phi) / W in Cartesian components
    const Vec3 er{sn * cp, sn * sp, c}, et{c * cp, c * sp, -sn}, ep{-sp, cp, 0.0};
    Vec3 nu{};
    for (int a = 0; a < 3; ++a) nu[a] = (r * er[a] - rt * et[a] - rp_s * ep[a]) / W;
    cd.normal[i] = nu;
    cd.radial_speed[i] = W / r;
  }
  return cd;
}

}  // namespace surface_detail

/// Principal-curvature data at every node. Axisymmetric grids compute R_k from
/// the warped-product form of the induced metric; full grids from det(II)/det(I).
inline CurvatureData curvature(const StarShapedSurface& s) {
  return s.grid().mode() == GridMode::axisymmetric ? surface_detail::axisymmetric_curvature(s)
                                                   : surface_detail::full_curvature(s);
}

inline double weighted_sum(std::span<const double> f, std::span<const double> da) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * da[i];
  return acc;
}

inline double area(const CurvatureData& cd) {
  double acc = 0.0;
  for (double v : cd.area_element) acc += v;
  return acc;
}
inline double total_mean_curvature(const CurvatureData& cd) { return weighted_sum(cd.mean, cd.area_element); }
inline double total_intrinsic_curvature(const CurvatureData& cd) {
  return weighted_sum(cd.intrinsic_r, cd.area_element);
}

inline double area(const StarShapedSurface& s) { return area(curvature(s)); }
inline double total_mean_curvature(const StarShapedSurface& s) { return total_mean_curvature(curvature(s)); }
inline double total_intrinsic_curvature(const StarShapedSurface& s) {
  return total_intrinsic_curvature(curvature(s));
}

struct YamabeQuotients {
  double y = 0.0;    // int R_k / |Sigma|^{(n-3)/(n-1)}
  double rel = 0.0;  // y divided by the unit round sphere's value on the same grid
};

inline double yamabe_quotient(const CurvatureData& cd, int n) {
  return total_intrinsic_curvature(cd) / std::pow(area(cd), (n - 3.0) / (n - 1.0));
}

inline YamabeQuotients yamabe_quotients(const StarShapedSurface& s, const CurvatureData& cd) {
  const int n = s.dimension();
  YamabeQuotients out;
  out.y = yamabe_quotient(cd, n);
  out.rel = out.y / yamabe_quotient(curvature(make_sphere(s.grid(), 1.0)), n);
  return out;
}

inline YamabeQuotients yamabe_quotients(const StarShapedSurface& s) { return yamabe_quotients(s, curvature(s)); }

/// Ambient vector field evaluated at a position (reduced coordinates).
using VectorField = std::function<Vec3(const Vec3&)>;

/// Coulomb-type field Q x / |x|^n, divergence free on R^n \ {0} with flux omega_{n-1} Q.
inline VectorField radial_field(int n, double charge) {
  return [n, charge](const Vec3& x) {
    const double r = norm(x);
    const double s = charge / std::pow(r, static_cast<double>(n));
    return Vec3{s * x[0], s * x[1], s * x[2]};
  };
}

/// (1 / omega_{n-1}) int <E, nu> dA with E sampled per node.
inline double charge_flux(const StarShapedSurface& s, const CurvatureData& cd, std::span<const Vec3> field) {
  if (field.size() != s.size()) throw ParameterError("field sample count does not match the surface");
  double acc = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) acc += dot(field[i], cd.normal[i]) * cd.area_element[i];
  return acc / omega(s.dimension());
}

inline std::vector<Vec3> sample_field(const StarShapedSurface& s, const VectorField& f) {
  std::vector<Vec3> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = f(s.position(i));
  return out;
}

inline double charge_flux(const StarShapedSurface& s, const VectorField& f) {
  return charge_flux(s, curvature(s), sample_field(s, f));
}

/// Pointwise Newton-MacLaurin slack ((n-2)/(n-1)) H^2 - 2K, minimized over nodes.
inline double newton_maclaurin_min_slack(const CurvatureData& cd, int n) {
  double best = std::numeric_limits<double>::infinity();
  const double c = (n - 2.0) / (n - 1.0);
  for (std::size_t i = 0; i < cd.size(); ++i)
    best = std::min(best, c * cd.mean[i] * cd.mean[i] - 2.0 * cd.extrinsic_k[i]);
  return best;
}

inline double min_of(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}
inline double max_of(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace cpl
