#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cpl/errors.hpp"

namespace cpl::quad {

struct Rule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive
};

/// Gauss rule for the symmetric Jacobi weight (1 - x^2)^alpha on [-1, 1].
/// alpha = 0 is Gauss-Legendre. Nodes come from the Golub-Welsch eigenproblem
/// and are polished by Newton on the orthonormal recurrence; weights are the
/// Christoffel numbers 1 / sum_k p_k(x)^2.
inline Rule gauss_jacobi_symmetric(int count, double alpha) {
  if (count < 1) throw ParameterError("quadrature rule needs at least one node");
  if (!(alpha > -1.0)) throw ParameterError("Jacobi exponent must exceed -1");

  const double ab = 2.0 * alpha;
  // mu0 = int (1-x^2)^alpha dx
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + 2.0 * std::lgamma(alpha + 1.0) -
                              std::lgamma(ab + 2.0));
  // sqrt(b_k), k = 1..count
  std::vector<double> beta(static_cast<std::size_t>(count) + 1, 0.0);
  for (int k = 1; k <= count; ++k) {
    const double kk = k;
    const double s = 2.0 * kk + ab;
    double b = 4.0 * kk * (kk + alpha) * (kk + alpha) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    beta[k] = std::sqrt(b);
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(count);
  Eigen::VectorXd sub(std::max(count - 1, 0));
  for (int k = 0; k + 1 < count; ++k) sub[k] = beta[k + 1];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (count == 1) {
    Rule r{{0.0}, {mu0}};
    return r;
  }
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + count);

  // p_0..p_count orthonormal; returns (p_count, d p_count / dx, sum_{k<count} p_k^2)
  auto evaluate = [&](double t, double& p, double& dp, double& sumsq) {
    double pm1 = 0.0, p0 = 1.0 / std::sqrt(mu0);
    double dpm1 = 0.0, dp0 = 0.0;
    sumsq = p0 * p0;
    for (int k = 0; k < count; ++k) {
      const double p1 = (t * p0 - beta[k] * pm1) / beta[k + 1];
      const double dp1 = (p0 + t * dp0 - beta[k] * dpm1) / beta[k + 1];
      pm1 = p0;
      p0 = p1;
      dpm1 = dp0;
      dp0 = dp1;
      if (k + 1 < count) sumsq += p0 * p0;
    }
    p = p0;
    dp = dp0;
  };

  Rule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    double t = x[i];
    double p = 0.0, dp = 0.0, s = 0.0;
    for (int it = 0; it < 4; ++it) {
      evaluate(t, p, dp, s);
      if (dp == 0.0) break;
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-17) break;
    }
    evaluate(t, p, dp, s);
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / s;
  }
  // Exact symmetry of the rule about 0.
  for (int i = 0; i < count / 2; ++i) {
    const int j = count - 1 - i;
    const double xn = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double wn = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -xn;
    rule.nodes[j] = xn;
    rule.weights[i] = rule.weights[j] = wn;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

inline Rule gauss_legendre(int count) { return gauss_jacobi_symmetric(count, 0.0); }

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

template <class F>
Estimate adaptive_kronrod(F& f, double a, double b, double rel_tol, double abs_tol, unsigned depth) {
  Estimate e;
  e.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &e.error);
  if (depth == 0 || e.error <= std::max(abs_tol, rel_tol * std::abs(e.value))) return e;
  const double m = 0.5 * (a + b);
  const Estimate l = adaptive_kronrod(f, a, m, rel_tol, 0.5 * abs_tol, depth - 1);
  const Estimate r = adaptive_kronrod(f, m, b, rel_tol, 0.5 * abs_tol, depth - 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (61-point) integration of a smooth integrand on [a, b].
/// A panel is accepted when its error estimate is below rel_tol |value| or its
/// share of abs_tol, so integrands that vanish up to roundoff terminate.
template <class F>
Estimate integrate(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0,
                   unsigned max_depth = 18) {
  return detail::adaptive_kronrod(f, a, b, rel_tol, abs_tol, max_depth);
}

}  // namespace cpl::quad
