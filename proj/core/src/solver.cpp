#include "hypermix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "hypermix/snapshot.hpp"
#include "hypermix/transform.hpp"

namespace hypermix {

namespace {

double energy(const SpectralField& spec) {
  double s = 0.0;
  for (const auto& c : spec.coeffs) s += std::norm(c);
  return plancherel_weight(spec.grid) * s;
}

// dissipation of the pure semigroup over dt, exact:
// sum |theta_hat|^2 (1 - e^{-2 kappa xi^4 dt}) * weight
double exact_dissipation(const SpectralField& spec, double kappa, double dt) {
  double s = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    double k2 = spec.grid.wavenumber_sq(i);
    s += std::norm(spec.coeffs[i]) * (-std::expm1(-2.0 * kappa * k2 * k2 * dt));
  }
  return plancherel_weight(spec.grid) * s;
}

double dissipation_rate(const SpectralField& spec, double kappa) {
  double d = laplacian_norm(spec);
  return 2.0 * kappa * d * d;
}

}  // namespace

SolverState init_state(const RealField& theta0) {
  SolverState s;
  s.theta_hat = forward(theta0);
  s.ref_hat = s.theta_hat;
  return s;
}

SpectralField hyperdiff_propagate(const SpectralField& spec, double kappa, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("hyperdiff_propagate: dt must be >= 0");
  SpectralField out = spec;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    double k2 = spec.grid.wavenumber_sq(i);
    out.coeffs[i] *= std::exp(-kappa * k2 * k2 * dt);
  }
  return out;
}

SpectralField advection_rhs(const SpectralField& theta_hat, const std::vector<RealField>& u,
                            const SchemeConfig& cfg) {
  if (u.empty() || !same_grid(theta_hat.grid, u[0].grid))
    throw std::invalid_argument("advection_rhs: velocity grid does not match theta");
  SpectralField th = cfg.dealias ? dealias_two_thirds(theta_hat) : theta_hat;
  auto grad = gradient(th);
  RealField accum = make_real_field(theta_hat.grid);
  for (std::size_t d = 0; d < u.size(); ++d) {
    RealField gd = inverse(grad[d]);
    for (std::size_t i = 0; i < accum.values.size(); ++i)
      accum.values[i] += u[d].values[i] * gd.values[i];
  }
  SpectralField out = forward(accum);
  if (cfg.dealias) dealias_two_thirds_inplace(out);
  for (auto& c : out.coeffs) c = -c;
  return out;
}

SolverState step(const SolverState& state, const FlowSpec& flow, const SchemeConfig& cfg,
                 double dt_max) {
  if (!(dt_max > 0.0)) throw std::invalid_argument("step: dt_max must be positive");
  const Grid& g = state.theta_hat.grid;
  SolverState next = state;

  if (flow.is_zero()) {
    // hyperdiffusion alone: exact propagation and exact energy ledger, any dt
    next.dissipated += exact_dissipation(state.theta_hat, cfg.kappa, dt_max);
    next.theta_hat = hyperdiff_propagate(state.theta_hat, cfg.kappa, dt_max);
    next.ref_hat = hyperdiff_propagate(state.ref_hat, cfg.kappa, dt_max);
    next.t += dt_max;
    next.dt = dt_max;
    next.step_count += 1;
    if (!std::isfinite(energy(next.theta_hat)))
      throw SolverAbort(next.step_count,
                        "solver: NaN detected at step " + std::to_string(next.step_count) +
                            ", t = " + std::to_string(next.t));
    return next;
  }

  double umax = flow_max_speed(flow, state.t);
  double dt = dt_max;
  if (umax > 0.0) dt = std::min(dt, cfg.cfl * g.spacing() / umax);
  dt = std::min(dt, cfg.step_growth * (1.0 + state.t));

  const double half = 0.5 * dt;
  std::vector<double> e_half = squared_wavenumbers(g);
  for (double& k2 : e_half) k2 = std::exp(-cfg.kappa * k2 * k2 * half);

  auto scale_add = [](const SpectralField& a, double c, const SpectralField& b) {
    SpectralField out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += c * b.coeffs[i];
    return out;
  };
  auto mul = [](const SpectralField& a, const std::vector<double>& sym) {
    SpectralField out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= sym[i];
    return out;
  };

  auto u_now = evaluate_flow(flow, state.t);
  auto u_mid = evaluate_flow(flow, state.t + half);
  auto u_end = evaluate_flow(flow, state.t + dt);

  // integrating-factor RK4 arranged so only decaying exponentials appear
  SpectralField a1 = advection_rhs(state.theta_hat, u_now, cfg);
  SpectralField stage = mul(scale_add(state.theta_hat, half, a1), e_half);
  SpectralField a2 = advection_rhs(stage, u_mid, cfg);
  stage = scale_add(mul(state.theta_hat, e_half), half, a2);
  SpectralField a3 = advection_rhs(stage, u_mid, cfg);
  SpectralField theta_full = mul(mul(state.theta_hat, e_half), e_half);
  stage = scale_add(theta_full, dt, mul(a3, e_half));
  SpectralField a4 = advection_rhs(stage, u_end, cfg);

  SpectralField result = std::move(theta_full);
  const double w = dt / 6.0;
  SpectralField ea1 = mul(mul(a1, e_half), e_half);
  SpectralField ea2 = mul(a2, e_half);
  SpectralField ea3 = mul(a3, e_half);
  for (std::size_t i = 0; i < result.coeffs.size(); ++i)
    result.coeffs[i] +=
        w * (ea1.coeffs[i] + 2.0 * ea2.coeffs[i] + 2.0 * ea3.coeffs[i] + a4.coeffs[i]);

  next.dissipated += 0.5 * dt * (dissipation_rate(state.theta_hat, cfg.kappa) +
                                 dissipation_rate(result, cfg.kappa));
  next.theta_hat = std::move(result);
  next.ref_hat = hyperdiff_propagate(state.ref_hat, cfg.kappa, dt);
  next.t = state.t + dt;
  next.dt = dt;
  next.step_count += 1;

  if (!std::isfinite(energy(next.theta_hat)))
    throw SolverAbort(next.step_count,
                      "solver: NaN detected at step " + std::to_string(next.step_count) +
                          ", t = " + std::to_string(next.t));
  return next;
}

double perturbation_norm(const SolverState& state) {
  double s = 0.0;
  for (std::size_t i = 0; i < state.theta_hat.coeffs.size(); ++i)
    s += std::norm(state.theta_hat.coeffs[i] - state.ref_hat.coeffs[i]);
  return std::sqrt(plancherel_weight(state.theta_hat.grid) * s);
}

double advective_production(const SolverState& state, const FlowSpec& flow,
                            const SchemeConfig& cfg) {
  if (flow.is_zero()) return 0.0;
  auto u = evaluate_flow(flow, state.t);
  SpectralField rhs = advection_rhs(state.theta_hat, u, cfg);
  double inner = 0.0;
  for (std::size_t i = 0; i < rhs.coeffs.size(); ++i)
    inner += (std::conj(state.theta_hat.coeffs[i]) * rhs.coeffs[i]).real();
  inner *= plancherel_weight(state.theta_hat.grid);
  double denom =
      l2_norm(state.theta_hat) * flow_max_speed(flow, state.t) * grad_norm(state.theta_hat);
  return denom > 0.0 ? std::abs(inner) / denom : 0.0;
}

RunResult run(const RunPlan& plan) {
  RunResult result;
  SolverState state = init_state(plan.theta0);
  const SchemeConfig& cfg = plan.scheme;

  double prev_energy = energy(state.theta_hat);
  double prev_dissipated = 0.0;
  int snap_counter = 0;

  auto emit_snapshot = [&](const SolverState& s) {
    if (plan.snapshot_dir.empty()) return;
    RealField field = inverse(s.theta_hat);
    char stem[64];
    std::snprintf(stem, sizeof stem, "/snapshot_%04d", snap_counter++);
    try {
      write_snapshot(field, plan.snapshot_dir + stem, s.t, "theta");
    } catch (const std::exception& e) {
      result.warnings.push_back(e.what());
    }
  };

  auto record = [&](const SolverState& s) {
    SamplePoint p;
    p.diag = compute_diagnostics(s.t, s.theta_hat, s.ref_hat, plan.bound_beta, cfg.kappa);
    p.step_count = s.step_count;
    p.dt = s.dt;
    double umax = flow_max_speed(plan.flow, s.t);
    p.cfl_ratio = s.dt * umax / s.theta_hat.grid.spacing();
    double e = p.diag.l2 * p.diag.l2;
    double delta_diss = s.dissipated - prev_dissipated;
    p.energy_residual = std::abs((e - prev_energy) + delta_diss) / std::max(e, prev_energy);
    p.production = advective_production(s, plan.flow, cfg);
    prev_energy = e;
    prev_dissipated = s.dissipated;
    result.samples.push_back(p);
    if (plan.log) {
      char line[192];
      std::snprintf(line, sizeof line, "step %ld t %.17g dt %.17g l2 %.17g cfl %.17g\n",
                    s.step_count, s.t, s.dt, p.diag.l2, p.cfl_ratio);
      (*plan.log) << line;
    }
  };

  // merged stop schedule: sampling points and snapshot dumps
  struct Stop {
    double t;
    bool sample;
    bool snapshot;
  };
  std::vector<Stop> stops;
  for (double t : plan.sample_times)
    if (t > 0.0) stops.push_back({t, true, false});
  for (double t : plan.snapshot_times)
    if (t > 0.0) stops.push_back({t, false, true});
  std::sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) { return a.t < b.t; });
  // merge coincident stops
  std::vector<Stop> merged;
  for (const Stop& s : stops) {
    if (!merged.empty() && std::abs(merged.back().t - s.t) < 1e-12 * std::max(1.0, s.t)) {
      merged.back().sample |= s.sample;
      merged.back().snapshot |= s.snapshot;
    } else {
      merged.push_back(s);
    }
  }

  record(state);  // t = 0
  bool snap_zero = std::any_of(plan.snapshot_times.begin(), plan.snapshot_times.end(),
                               [](double t) { return t == 0.0; });
  if (snap_zero) emit_snapshot(state);

  for (const Stop& stop : merged) {
    while (state.t < stop.t - 1e-12 * std::max(1.0, stop.t))
      state = step(state, plan.flow, cfg, stop.t - state.t);
    if (stop.snapshot) emit_snapshot(state);
    if (stop.sample) record(state);
  }
  return result;
}

std::vector<double> default_sample_times(double t_end, double ratio) {
  if (!(t_end > 0.0)) throw std::invalid_argument("default_sample_times: t_end must be positive");
  if (!(ratio > 1.0)) throw std::invalid_argument("default_sample_times: ratio must exceed 1");
  std::vector<double> ts{0.0};
  for (int i = 1; i <= 10; ++i) {
    double t = 0.1 * i;
    if (t >= t_end) break;
    ts.push_back(t);
  }
  double t = 1.0;
  while (t < t_end) {
    ts.push_back(t);
    t *= ratio;
  }
  ts.push_back(t_end);
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           ts.end());
  return ts;
}

}  // namespace hypermix
