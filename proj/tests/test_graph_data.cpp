#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cpl/graph_data.hpp"

using namespace cpl;

namespace {

// Scalar curvature of dr^2 (1 + u'^2) + r^2 g_S from the divergence form
// R = (n-1) / r^{n-1} d/dr [ r^{n-2} (1 - 1 / (1 + u'^2)) ], differentiated by
// a fourth-order central difference.
double fd_scalar_curvature(const RadialGraphData& d, double r) {
  auto g = [&](double x) {
    const double w = d.slope(x) * d.slope(x);
    return std::pow(x, d.n - 2.0) * w / (1.0 + w);
  };
  const double h = 1e-3 * (r - d.r_start);
  const double dg = (-g(r + 2 * h) + 8 * g(r + h) - 8 * g(r - h) + g(r - 2 * h)) / (12 * h);
  return (d.n - 1.0) * dg / std::pow(r, d.n - 1.0);
}

const std::vector<std::tuple<int, double, double>> kPoints{{3, 1, 0}, {3, 1, 0.5}, {3, 2, 1},
                                                           {4, 1, 0}, {4, 1, 0.5}, {4, 2, 1}};

}  // namespace

TEST(GraphData, ScalarCurvatureMatchesExactRnt) {
  for (auto [n, m, q] : kPoints) {
    const RntParams p(n, m, q);
    const auto d = rnt_graph(p);
    double worst = 0.0;
    for (double r : radial_grid(d, 100 * d.r_start, 1000))
      worst = std::max(worst, std::abs(graph_scalar_curvature(d, r) - rnt_scalar_curvature(p, r)));
    EXPECT_LT(worst, 1e-9) << n << " " << m << " " << q;
  }
}

TEST(GraphData, ScalarCurvatureMatchesFiniteDifferences) {
  const auto d = perturbed_rnt_graph(RntParams(4, 1, 0.3), 0.1, 0.7);
  for (double f : {1.05, 1.3, 2.0, 5.0}) {
    const double r = f * d.r_start;
    EXPECT_NEAR(graph_scalar_curvature(d, r), fd_scalar_curvature(d, r), 1e-8) << r;
  }
}

TEST(GraphData, MassFormulaRecoversRntMass) {
  for (auto [n, m, q] : kPoints) {
    const auto mb = mass_via_formula(rnt_graph(RntParams(n, m, q)));
    EXPECT_NEAR(mb.total, m, 1e-6) << n << " " << m << " " << q;
    EXPECT_NEAR(mb.boundary_term, 0.5 * std::pow(horizon_radii(RntParams(n, m, q)).r_plus, n - 2.0), 1e-12);
    EXPECT_NEAR(mb.bulk_term, mb.bulk_quadrature + mb.bulk_tail, 1e-15);
    EXPECT_GE(mb.dec_residual_min, -1e-9);
  }
  for (int n : {5, 7}) EXPECT_NEAR(mass_via_formula(rnt_graph(RntParams(n, 1, 0.3))).total, 1.0, 1e-6);
}

TEST(GraphData, AdmLimitRecoversRntMass) {
  for (auto [n, m, q] : kPoints) {
    const auto d = rnt_graph(RntParams(n, m, q));
    const double r0 = d.r_start;
    EXPECT_NEAR(adm_mass_limit(d, {1e2 * r0, 1e3 * r0, 1e4 * r0}), m, 1e-4);
  }
}

TEST(GraphData, PerturbationKeepsMassAndBreaksEnergyCondition) {
  const auto d = perturbed_rnt_graph(RntParams(3, 1, 0.5), 0.05, 1.0);
  const auto mb = mass_via_formula(d);
  EXPECT_NEAR(mb.total, 1.0, 1e-6);
  EXPECT_LT(mb.dec_residual_min, -1e-5);
  // halving the field restores it for a short-range perturbation
  const auto e = perturbed_rnt_graph(RntParams(3, 1, 0.5), 0.05, 0.5, 0.5);
  const auto res = energy_condition_residual(e, radial_grid(e, 1e3 * e.r_start, 400));
  EXPECT_GE(*std::min_element(res.begin(), res.end()), -1e-12);
}

TEST(GraphData, FieldScalingAndCharge) {
  const auto d = rnt_graph(RntParams(4, 2, 1), 1.1);
  EXPECT_NEAR(charge_from_field(d, 3.0), 1.1, 1e-14);
  const auto res = energy_condition_residual(d, {2.0, 5.0});
  EXPECT_LT(res[0], 0.0);
  EXPECT_LT(res[1], 0.0);
}

TEST(GraphData, FlatGraph) {
  const auto d = flat_graph(3, 2.0);
  const auto mb = mass_via_formula(d);
  EXPECT_NEAR(mb.total, 1.0, 1e-15);  // c_3 int H over the sphere of radius 2
  EXPECT_EQ(mb.bulk_term, 0.0);
  EXPECT_EQ(graph_scalar_curvature(d, 3.0), 0.0);
  EXPECT_TRUE(std::isinf(check_decay(d).sigma));
}

TEST(GraphData, TableProfileReproducesRnt) {
  const RntParams p(3, 1, 0.5);
  const double rp = horizon_radii(p).r_plus;
  std::vector<double> r, s;
  for (int k = 0; k < 600; ++k) {
    r.push_back(rp + 1e-6 * std::pow(1e9, k / 599.0));
    s.push_back(embedding_slope(p, r.back()));
  }
  const auto d = table_graph(3, rp, r, s, 0.5);
  EXPECT_NEAR(mass_via_formula(d).total, 1.0, 1e-5);
  for (double x : {2.5, 10.0, 2000.0}) EXPECT_NEAR(d.slope(x), embedding_slope(p, x), 1e-6 * embedding_slope(p, x));
  EXPECT_THROW(table_graph(3, rp, {2.0, 1.9, 3.0}, {1.0, 1.0, 1.0}, 0.0), ParameterError);
  EXPECT_THROW(table_graph(3, rp, {2.0, 3.0}, {1.0, 1.0}, 0.0), ParameterError);
  EXPECT_THROW(table_graph(3, rp, {2.0, 3.0, 4.0}, {1.0, -1.0, 1.0}, 0.0), ParameterError);
}

TEST(GraphData, SlowDecayIsRejected) {
  RadialGraphData d = flat_graph(3, 1.0);
  d.slope = [](double r) { return std::pow(r, -0.1); };  // u'^2 ~ r^{-1/5}
  d.slope_deriv = [](double r) { return -0.1 * std::pow(r, -1.1); };
  EXPECT_THROW(check_decay(d), DecayError);
}

TEST(GraphData, DomainChecks) {
  const auto d = rnt_graph(RntParams(3, 1, 0.5));
  EXPECT_THROW(graph_scalar_curvature(d, d.r_start), DomainError);
  EXPECT_THROW(graph_scalar_curvature(d, 0.5), DomainError);
  EXPECT_THROW(rnt_graph(RntParams(3, 1, 1)), ParameterError);
  EXPECT_THROW(radial_grid(d, 0.5, 10), ParameterError);
  EXPECT_THROW(perturbed_rnt_graph(RntParams(3, 1, 0.5), 0.1, 0.0), ParameterError);
}

TEST(GraphData, InducedMetricFactor) {
  const RntParams p(4, 1, 0.5);
  const auto d = rnt_graph(p);
  for (double r : {1.5, 3.0}) EXPECT_NEAR(induced_metric_factor(d, r), 1.0 / lapse_squared(p, r), 1e-10);
}
