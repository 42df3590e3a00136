#pragma once

// Seeded test surfaces. Random draws use mt19937_64 (fully specified by the
// standard) with an explicit bits-to-double conversion, so a seed produces the
// same corpus on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cpl/surface.hpp"

namespace cpl {

class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double range(double a, double b) { return a + (b - a) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(unit() * (hi - lo + 1)); }  // [lo, hi]

 private:
  std::mt19937_64 gen_;
};

/// Spheroid with semi-axes a (equatorial) and c (along the axis), centered at
/// offset * axis. The origin must be interior: |offset| < c.
struct OffsetSpheroid {
  double a = 1.0, c = 1.0, offset = 0.0;

  /// Distance from the origin to the boundary along the unit direction with
  /// axial component z and distance s from the axis.
  double radius(double z, double s) const {
    const double A = s * s / (a * a) + z * z / (c * c);
    const double B = -2.0 * z * offset / (c * c);
    const double C = offset * offset / (c * c) - 1.0;
    return (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  }
};

/// Axial component and axis distance of a grid direction.
inline std::pair<double, double> axial_split(const SphereGrid& g, const Vec3& w) {
  if (g.mode() == GridMode::axisymmetric) return {w[0], w[1]};
  return {w[2], std::hypot(w[0], w[1])};
}

/// Boundary of the convex body whose gauge is the sum of the gauges of the
/// given spheroids: rho = 1 / sum_k (1 / rho_k). Sums of gauges are gauges of
/// convex bodies, so the result is convex.
inline StarShapedSurface gauge_sum_surface(const SphereGrid& g, const std::vector<OffsetSpheroid>& parts,
                                           std::string label = "gauge-sum") {
  for (const auto& p : parts) {
    if (!(p.a > 0.0) || !(p.c > 0.0) || !(std::abs(p.offset) < p.c))
      throw ParameterError("spheroid parts must contain the origin in their interior");
  }
  return make_surface(
      g,
      [&](const Vec3& w) {
        const auto [z, s] = axial_split(g, w);
        double gauge = 0.0;
        for (const auto& p : parts) gauge += 1.0 / p.radius(z, s);
        return 1.0 / gauge;
      },
      std::move(label));
}

/// `index`-th random convex axisymmetric surface of the corpus for `seed`.
inline StarShapedSurface random_convex_surface(const SphereGrid& g, std::uint64_t seed, int index) {
  SeededUniform u(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index));
  const int count = u.integer(1, 3);
  std::vector<OffsetSpheroid> parts;
  for (int k = 0; k < count; ++k) {
    OffsetSpheroid p;
    p.a = u.range(0.6, 1.8);
    p.c = u.range(0.6, 1.8);
    p.offset = u.range(-0.5, 0.5) * p.c;
    parts.push_back(p);
  }
  return gauge_sum_surface(g, parts, "convex-" + std::to_string(seed) + "-" + std::to_string(index));
}

/// Star-shaped, generally non-convex surface rho = exp(sum_l eps_l P_l(cos theta))
/// (axisymmetric) or with a few random non-zonal modes on full grids.
inline StarShapedSurface random_star_surface(const SphereGrid& g, std::uint64_t seed, int index,
                                             double amplitude = 0.25) {
  SeededUniform u(seed * 0xD1B54A32D192ED03ULL + static_cast<std::uint64_t>(index));
  std::vector<double> eps(6);
  for (auto& e : eps) e = u.range(-amplitude, amplitude);
  std::vector<double> mode_c(4), mode_s(4);
  for (auto& e : mode_c) e = u.range(-amplitude, amplitude);
  for (auto& e : mode_s) e = u.range(-amplitude, amplitude);
  const bool full = g.mode() == GridMode::full;
  return make_surface(
      g,
      [&](const Vec3& w) {
        const auto [z, s] = axial_split(g, w);
        // Legendre P_1..P_6 by recurrence
        double p0 = 1.0, p1 = z, acc = eps[0] * p1;
        for (int l = 2; l <= 6; ++l) {
          const double p2 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p0) / l;
          acc += eps[l - 1] * p2;
          p0 = p1;
          p1 = p2;
        }
        if (full && s > 0.0) {
          const double phi = std::atan2(w[1], w[0]);
          for (int m = 1; m <= 4; ++m)
            acc += std::pow(s, m) * (mode_c[m - 1] * std::cos(m * phi) + mode_s[m - 1] * std::sin(m * phi));
        }
        return std::exp(acc);
      },
      "star-" + std::to_string(seed) + "-" + std::to_string(index));
}

}  // namespace cpl
