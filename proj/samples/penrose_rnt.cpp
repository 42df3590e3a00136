// Penrose-type check on exact Reissner-Nordstrom-Tangherlini data:
// horizon radius, area radius and the slack of m >= (R + q^2 / R) / 2.

#include <cstdio>

#include "cpl/cpl.hpp"

int main() {
  for (int n : {3, 4, 5}) {
    const cpl::RntParams p(n, 1.0, 0.6);
    const auto h = cpl::horizon_radii(p);
    const double area = cpl::omega(n) * std::pow(h.r_plus, n - 1.0);
    const auto reports = cpl::penrose_report(p.m, area, p.q, n);
    const auto* pen = cpl::find_report(reports, "penrose");
    std::printf("n=%d r_+=%.15g area radius=%.15g penrose slack=%.3e (%s)\n", n, h.r_plus,
                cpl::area_radius(area, n), pen->slack, cpl::to_string(pen->verdict));
  }
}
