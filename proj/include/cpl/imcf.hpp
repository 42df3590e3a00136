#pragma once

// Inverse mean curvature flow of star-shaped, strictly mean-convex surfaces,
// written as an evolution of the radial function:
//   d rho / dt = (1 / H) / <nu, omega> = W / (rho H),   W = sqrt(rho^2 + |grad rho|^2).
// Explicit RK4; steps that exceed the parabolic stability bound are subdivided.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/surface.hpp"

namespace cpl {

struct FlowMonitors {
  double area = 0.0;
  double int_h = 0.0;
  double roundness = 0.0;         // max H / min H - 1
  double decay_functional = 0.0;  // exp(-(n-2)/(n-1) t) int H
};

/// exp(-(n-2)/(n-1) t); the growth rate bound of int H along the flow.
inline double decay_rate(int n) { return (n - 2.0) / (n - 1.0); }

inline FlowMonitors compute_monitors(const CurvatureData& cd, int n, double t) {
  FlowMonitors m;
  m.area = area(cd);
  m.int_h = total_mean_curvature(cd);
  m.roundness = max_of(cd.mean) / min_of(cd.mean) - 1.0;
  m.decay_functional = std::exp(-decay_rate(n) * t) * m.int_h;
  return m;
}

struct FlowState {
  double t = 0.0;
  StarShapedSurface surface;
  CurvatureData curvature;
  FlowMonitors monitors;
};

/// Snapshot of a surface at time t. Throws FlowBreakdownError unless H > 0 everywhere.
inline FlowState make_flow_state(StarShapedSurface s, double t = 0.0) {
  CurvatureData cd = curvature(s);
  const double hmin = min_of(cd.mean);
  if (!(hmin > 0.0)) {
    throw FlowBreakdownError("surface is not strictly mean convex (min H = " + std::to_string(hmin) + ")", t);
  }
  FlowMonitors m = compute_monitors(cd, s.dimension(), t);
  return FlowState{t, std::move(s), std::move(cd), m};
}

struct FlowOptions {
  double safety = 0.8;          // fraction of the RK4 real-axis stability limit
  double min_stable_step = 1e-9;  // breakdown when the stable step collapses below this (H -> 0)
};

/// Largest step the explicit scheme tolerates at this state: the linearized
/// operator is (rho H)^{-2} times the angular Laplacian, whose spectrum on the
/// grid is bounded by L(L + n - 2).
inline double stable_step(const FlowState& s, const FlowOptions& opt = {}) {
  constexpr double kRk4RealAxis = 2.785;
  const auto rho = s.surface.rho();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double rh = rho[i] * s.curvature.mean[i] / s.curvature.radial_speed[i];
    worst = std::min(worst, rh * rh);
  }
  return opt.safety * kRk4RealAxis * worst / s.surface.grid().laplacian_bound();
}

namespace imcf_detail {

inline std::vector<double> radial_velocity(const SphereGrid& grid, const std::vector<double>& rho, double t) {
  StarShapedSurface s = [&] {
    try {
      return StarShapedSurface(grid, rho);
    } catch (const ParameterError& e) {
      throw FlowBreakdownError(std::string("flow left the star-shaped class: ") + e.what(), t);
    }
  }();
  const CurvatureData cd = curvature(s);
  std::vector<double> v(rho.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(cd.mean[i] > 0.0)) {
      throw FlowBreakdownError("mean curvature became nonpositive at node " + std::to_string(i), t);
    }
    v[i] = cd.radial_speed[i] / cd.mean[i];
  }
  return v;
}

inline std::vector<double> rk4(const SphereGrid& grid, const std::vector<double>& rho, double t, double dt) {
  const std::size_t n = rho.size();
  auto axpy = [n](const std::vector<double>& a, double h, const std::vector<double>& k) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + h * k[i];
    return r;
  };
  const auto k1 = radial_velocity(grid, rho, t);
  const auto k2 = radial_velocity(grid, axpy(rho, 0.5 * dt, k1), t + 0.5 * dt);
  const auto k3 = radial_velocity(grid, axpy(rho, 0.5 * dt, k2), t + 0.5 * dt);
  const auto k4 = radial_velocity(grid, axpy(rho, dt, k3), t + dt);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rho[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  if (grid.mode() == GridMode::full) out = grid.project(out);
  return out;
}

}  // namespace imcf_detail

/// Advance by dt (subdivided as needed). Throws FlowBreakdownError if H <= 0
/// is reached; the input state is left untouched.
inline FlowState imcf_step(const FlowState& state, double dt, const FlowOptions& opt = {}) {
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  if (!(min_of(state.curvature.mean) > 0.0)) throw FlowBreakdownError("flow speed 1/H undefined", state.t);
  FlowState cur = state;
  double remaining = dt;
  while (remaining > 0.0) {
    const double limit = stable_step(cur, opt);
    if (!(limit >= opt.min_stable_step)) {
      throw FlowBreakdownError("stable step " + std::to_string(limit) + " fell below the minimum " +
                                   std::to_string(opt.min_stable_step) + " (mean curvature degenerating)",
                               cur.t);
    }
    const int pieces = static_cast<int>(std::ceil(remaining / limit - 1e-9));
    const double h = pieces <= 1 ? remaining : remaining / pieces;
    auto rho = imcf_detail::rk4(cur.surface.grid(), std::vector<double>(cur.surface.rho().begin(), cur.surface.rho().end()),
                                cur.t, h);
    const double t_next = (h == remaining) ? state.t + dt : cur.t + h;
    StarShapedSurface next = [&] {
      try {
        return StarShapedSurface(cur.surface.grid(), std::move(rho), cur.surface.label());
      } catch (const ParameterError& e) {
        throw FlowBreakdownError(e.what(), t_next);
      }
    }();
    cur = make_flow_state(std::move(next), t_next);
    remaining = (h == remaining) ? 0.0 : remaining - h;
  }
  return cur;
}

/// One row of the per-step trace.
struct MonitorRecord {
  double t = 0.0;
  FlowMonitors monitors;
  double newton_maclaurin_slack = 0.0;  // min over nodes of ((n-2)/(n-1)) H^2 - 2K
};

struct FlowBreakdown {
  double time = 0.0;
  std::string message;
};

struct FlowRun {
  std::vector<FlowState> samples;     // t = 0, every sample_every steps, and the final state
  std::vector<MonitorRecord> trace;   // every step
  std::optional<FlowBreakdown> breakdown;
  bool completed() const { return !breakdown.has_value(); }
};

/// Runs the flow to t_end with nominal step dt. On breakdown the run stops and
/// returns everything computed so far plus the breakdown diagnostics.
inline FlowRun run_flow(const StarShapedSurface& initial, double t_end, double dt, int sample_every = 1,
                        const FlowOptions& opt = {}) {
  if (!(t_end >= 0.0) || !(dt > 0.0) || sample_every < 1) {
    throw ParameterError("run_flow needs t_end >= 0, dt > 0 and sample_every >= 1");
  }
  FlowRun run;
  FlowState state = [&] {
    try {
      return make_flow_state(initial, 0.0);
    } catch (const FlowBreakdownError& e) {
      throw ParameterError(std::string("initial surface: ") + e.what());
    }
  }();
  const int n = initial.dimension();
  auto record = [&](const FlowState& s) {
    run.trace.push_back({s.t, s.monitors, newton_maclaurin_min_slack(s.curvature, n)});
  };
  record(state);
  run.samples.push_back(state);
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long k = 1; k <= steps; ++k) {
    const double h = (k == steps) ? t_end - state.t : dt;
    if (!(h > 0.0)) break;
    try {
      state = imcf_step(state, h, opt);
    } catch (const FlowBreakdownError& e) {
      run.breakdown = FlowBreakdown{e.time(), e.what()};
      if (run.samples.back().t != state.t) run.samples.push_back(state);
      return run;
    }
    record(state);
    if (k % sample_every == 0 || k == steps) run.samples.push_back(state);
  }
  return run;
}

/// Largest per-step increase of the decay functional M(t) over a trace
/// (<= 0 means monotone non-increasing).
inline double max_decay_increase(const std::vector<MonitorRecord>& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.size(); ++k) {
    worst = std::max(worst, trace[k].monitors.decay_functional - trace[k - 1].monitors.decay_functional);
  }
  return trace.size() < 2 ? 0.0 : worst;
}

// --- Cauchy-Schwarz chain for the electric energy along the flow ----------

struct FluxChainSample {
  double t = 0.0;
  double i0 = 0.0;      // int <E, nu>^2 / H
  double i1 = 0.0;      // (int H)^{-1} (int <E, nu>)^2
  double i2 = 0.0;      // (int H dSigma_0)^{-1} exp(-(n-2)/(n-1) t) (omega Q)^2
  double full = 0.0;    // int |E|^2 / H, dominates i0
  double flux = 0.0;    // int <E, nu>, equals omega Q for divergence-free E
};

struct FluxChain {
  std::vector<FluxChainSample> samples;
  double charge = 0.0;               // Q measured on the initial surface
  double int_h0 = 0.0;
  double time_integral_i0 = 0.0;     // trapezoid over samples + exponential tail
  double time_integral_i1 = 0.0;
  double closed_time_integral = 0.0; // (omega Q)^2 / int H_0 * (n-1)/(n-2)
  double energy_lower_bound = 0.0;   // Q^2 / (4 c_n int H_0)
  double worst_order_violation = 0.0;  // max over samples of (i1 - i0, i2 - i1), <= tol when ordered

  bool ordered(double tol) const { return worst_order_violation <= tol; }
};

inline FluxChainSample flux_chain_sample(const FlowState& s, const VectorField& field, double int_h0,
                                         double omega_q) {
  const int n = s.surface.dimension();
  const auto& cd = s.curvature;
  FluxChainSample out;
  out.t = s.t;
  for (std::size_t i = 0; i < cd.size(); ++i) {
    const Vec3 e = field(s.surface.position(i));
    const double en = dot(e, cd.normal[i]);
    const double da = cd.area_element[i];
    out.i0 += en * en / cd.mean[i] * da;
    out.full += dot(e, e) / cd.mean[i] * da;
    out.flux += en * da;
  }
  out.i1 = out.flux * out.flux / s.monitors.int_h;
  out.i2 = omega_q * omega_q / int_h0 * std::exp(-decay_rate(n) * s.t);
  return out;
}

/// Trapezoid rule over the samples plus the exponential tail f(t_end) / rate.
inline double time_integral_with_tail(const std::vector<double>& t, const std::vector<double>& f, double rate) {
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  if (!f.empty()) acc += f.back() / rate;
  return acc;
}

inline FluxChain flux_chain(const std::vector<FlowState>& states, const VectorField& field) {
  FluxChain chain;
  if (states.empty()) return chain;
  const int n = states.front().surface.dimension();
  const double w = omega(n);
  chain.int_h0 = states.front().monitors.int_h;
  chain.charge = charge_flux(states.front().surface, field);
  const double omega_q = w * chain.charge;
  std::vector<double> ts, f0, f1;
  chain.worst_order_violation = -std::numeric_limits<double>::infinity();
  for (const auto& s : states) {
    auto smp = flux_chain_sample(s, field, chain.int_h0, omega_q);
    chain.worst_order_violation = std::max({chain.worst_order_violation, smp.i1 - smp.i0, smp.i2 - smp.i1});
    ts.push_back(smp.t);
    f0.push_back(smp.i0);
    f1.push_back(smp.i1);
    chain.samples.push_back(smp);
  }
  const double rate = decay_rate(n);
  chain.time_integral_i0 = time_integral_with_tail(ts, f0, rate);
  chain.time_integral_i1 = time_integral_with_tail(ts, f1, rate);
  chain.closed_time_integral = omega_q * omega_q / chain.int_h0 / rate;
  chain.energy_lower_bound = chain.charge * chain.charge / (4.0 * mass_constant(n) * chain.int_h0);
  return chain;
}

/// CSV of the sampled states: t, area, intH, roundness, M, I0, I1, I2.
/// The I columns are empty when no chain is given.
inline void write_flow_csv(std::ostream& os, const std::vector<FlowState>& samples, const FluxChain* chain = nullptr) {
  os << "t,area,intH,roundness,M,I0,I1,I2\n";
  char buf[64];
  auto put = [&](double v, bool last = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << (last ? "\n" : ",");
  };
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& m = samples[k].monitors;
    put(samples[k].t);
    put(m.area);
    put(m.int_h);
    put(m.roundness);
    if (chain && k < chain->samples.size()) {
      put(m.decay_functional);
      put(chain->samples[k].i0);
      put(chain->samples[k].i1);
      put(chain->samples[k].i2, true);
    } else {
      put(m.decay_functional);
      os << ",,\n";
    }
  }
}

}  // namespace cpl
