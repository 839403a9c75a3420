#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypermix/diagnostics.hpp"
#include "hypermix/flows.hpp"
#include "hypermix/grid.hpp"

namespace hypermix {

struct SchemeConfig {
  double kappa = 1.0;
  double cfl = 0.5;          // advective Courant factor
  bool dealias = true;
  int rk_stages = 4;
  double step_growth = 0.006;  // max relative growth of (1+t) per advected step,
                               // keeps the trapezoidal energy ledger below 1e-6
};

/// One integration frame. The reference field evolves under pure
/// hyperdiffusion from the same initial data; theta - reference is the
/// advection-induced perturbation, zero at t = 0.
struct SolverState {
  double t = 0.0;
  SpectralField theta_hat;
  SpectralField ref_hat;
  double dt = 0.0;  // last step size taken
  long step_count = 0;
  double dissipated = 0.0;  // running 2 kappa integral of ||lap theta||_2^2
};

struct SolverAbort : std::runtime_error {
  long step_index;
  explicit SolverAbort(long step, const std::string& what)
      : std::runtime_error(what), step_index(step) {}
};

SolverState init_state(const RealField& theta0);

/// Exact propagator of the pure hyperdiffusion semigroup: multiplication by
/// exp(-kappa |xi|^4 dt). Exact at any dt; semigroup property holds.
SpectralField hyperdiff_propagate(const SpectralField& spec, double kappa, double dt);

/// -(u . grad theta) in spectral space, pseudo-spectral with the 2/3 rule on
/// inputs and output. The discrete advection term is energy-neutral.
SpectralField advection_rhs(const SpectralField& theta_hat, const std::vector<RealField>& u,
                            const SchemeConfig& cfg);

/// Advances one step of at most dt_max: exact propagation when the flow is
/// zero, otherwise integrating-factor RK4 with dt further limited by the
/// CFL rule and the relative-growth cap. Aborts (never clamps) on NaN.
SolverState step(const SolverState& state, const FlowSpec& flow, const SchemeConfig& cfg,
                 double dt_max);

/// ||theta - reference||_2 by Parseval.
double perturbation_norm(const SolverState& state);

/// Real inner product <theta, u.grad theta> normalized by
/// ||theta||_2 ||u||_inf ||grad theta||_2; zero for divergence-free flows
/// up to roundoff.
double advective_production(const SolverState& state, const FlowSpec& flow,
                            const SchemeConfig& cfg);

struct SamplePoint {
  MixingDiagnostics diag;
  long step_count = 0;
  double dt = 0.0;
  double cfl_ratio = 0.0;
  double energy_residual = 0.0;  // |Delta||theta||^2 + 2 kappa int ||lap theta||^2| / max energy
  double production = 0.0;       // advective energy production, relative
};

struct RunPlan {
  SchemeConfig scheme;
  RealField theta0;
  FlowSpec flow;
  std::vector<double> sample_times;  // ascending; 0 is sampled implicitly
  double bound_beta = 1.0;           // splitting radius parameter for diagnostics
  std::vector<double> snapshot_times;
  std::string snapshot_dir;  // empty disables dumps
  std::ostream* log = nullptr;
};

struct RunResult {
  std::vector<SamplePoint> samples;
  std::vector<std::string> warnings;  // e.g. snapshot disk-write failures;
                                      // the integration itself continues
};

/// Integrates the plan, sampling diagnostics at the requested times.
/// Deterministic: no randomness enters the dynamics.
RunResult run(const RunPlan& plan);

/// Sample schedule: 0, then uniform steps of 0.1 up to 1, then geometric
/// with the given ratio up to t_end (t_end always included).
std::vector<double> default_sample_times(double t_end, double ratio);

}  // namespace hypermix
