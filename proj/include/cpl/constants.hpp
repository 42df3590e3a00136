#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cpl/errors.hpp"

namespace cpl {

inline constexpr int kMaxDimension = 64;

inline void require_dimension(int n) {
  if (n < 3 || n > kMaxDimension) {
    throw ParameterError("dimension n must satisfy 3 <= n <= " + std::to_string(kMaxDimension) +
                         ", got " + std::to_string(n));
  }
}

namespace detail {
inline const std::array<double, kMaxDimension + 1>& unit_sphere_areas() {
  static const auto table = [] {
    std::array<double, kMaxDimension + 1> t{};
    for (int k = 0; k <= kMaxDimension; ++k) {
      const double half = 0.5 * (k + 1);
      t[k] = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
    }
    return t;
  }();
  return table;
}
}  // namespace detail

/// Area of the unit round sphere S^k in R^{k+1}: 2 pi^{(k+1)/2} / Gamma((k+1)/2).
inline double unit_sphere_area(int k) {
  if (k < 0 || k > kMaxDimension) throw ParameterError("sphere dimension out of range");
  return detail::unit_sphere_areas()[k];
}

/// omega_{n-1}, the area of the unit sphere bounding the unit ball of R^n.
inline double omega(int n) { return unit_sphere_area(n - 1); }

/// Normalization of the ADM mass flux, 1 / (2 (n-1) omega_{n-1}).
inline double mass_constant(int n) {
  require_dimension(n);
  return 1.0 / (2.0 * (n - 1) * omega(n));
}

/// Constant of the Alexandrov-Fenchel inequality between total scalar and
/// total mean curvature; saturated by round spheres.
inline double af_scalar_constant(int n) {
  require_dimension(n);
  const double w = omega(n);
  return (n - 1.0) * (n - 2.0) * w / std::pow((n - 1.0) * w, (n - 3.0) / (n - 2.0));
}

/// Area radius (|Sigma| / omega_{n-1})^{(n-2)/(n-1)}; equals r^{n-2} on a round sphere.
inline double area_radius(double area, int n) {
  require_dimension(n);
  if (!(area > 0.0)) throw ParameterError("area must be positive");
  return std::pow(area / omega(n), (n - 2.0) / (n - 1.0));
}

}  // namespace cpl
