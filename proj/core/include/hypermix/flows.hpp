#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypermix/grid.hpp"

namespace hypermix {

/// Continuum transform descriptor of the Gaussian initial data:
/// |theta0_hat(xi)| = amplitude (2 pi sigma^2)^{n/2} exp(-sigma^2 |xi|^2 / 2),
/// positive everywhere, so the low-mode floor hypothesis is certifiable for
/// every radius.
struct GaussianTransform {
  int dim = 0;
  double sigma = 0.0;
  double amplitude = 0.0;

  double amplitude_at(double xi_mag) const;
  double value_at_zero() const { return amplitude_at(0.0); }
  double l1_norm() const { return value_at_zero(); }  // positive bump
  double l2_norm() const;                             // (pi sigma^2)^{n/4} amplitude
};

/// Gaussian bump centered in the box. Requires L >= 12 sigma so the
/// periodization error is below 1e-15.
std::pair<RealField, GaussianTransform> gaussian_theta0(const Grid& grid, double sigma,
                                                        double amplitude);

/// Certified floor: min over grid modes with |xi| <= delta of the
/// continuum-normalized |theta0_hat|. Requires at least one nonzero mode
/// inside the ball.
double certify_M(const SpectralField& theta0_hat, double delta);

enum class FlowProfile { zero, taylor_green, shear, user_snapshot };

/// v = (sin(2 pi m x1/L) cos(2 pi m x2/L), -cos(...) sin(...) [, 0]),
/// divergence-free analytically; m must be resolved by the grid.
std::vector<RealField> taylor_green(const Grid& grid, int m);

/// v = (sin(2 pi m x2/L), 0 [, 0]); gradient decay exponent equals the
/// amplitude exponent like every separable profile.
std::vector<RealField> shear(const Grid& grid, int m);

struct FlowSnapshotSeq {
  std::vector<double> times;
  std::vector<std::vector<RealField>> velocities;  // one vector field per time
};

/// Divergence-free velocity family u(x,t) = a0 (1+t)^{-alpha} v(x) for the
/// built-in profiles, or a time-interpolated snapshot sequence.
struct FlowSpec {
  FlowProfile profile = FlowProfile::zero;
  double a0 = 0.0;
  double alpha = 0.0;
  double nu = 0.0;        // = alpha for separable profiles
  double c_grad_u = 0.0;  // = a0 * ||grad v||_inf for separable profiles
  double profile_l2 = 0.0;
  double profile_grad_inf = 0.0;
  double profile_max_speed = 0.0;
  std::vector<RealField> base;
  std::shared_ptr<const FlowSnapshotSeq> snapshots;

  bool is_zero() const { return profile == FlowProfile::zero; }
};

FlowSpec zero_flow();
FlowSpec make_separable_flow(FlowProfile profile, const Grid& grid, int m, double a0,
                             double alpha);

/// Loads a directory holding manifest.json {"times": [...], "components":
/// [[stem, ...], ...]} of snapshot stems relative to the directory.
FlowSpec load_snapshot_flow(const std::string& dir);

std::vector<RealField> evaluate_flow(const FlowSpec& spec, double t);
double flow_max_speed(const FlowSpec& spec, double t);

/// Max-norm of the spectral divergence of a sampled velocity field.
double divergence_max(const std::vector<RealField>& u);

struct FlowDecayFit {
  double alpha_fit = 0.0;
  double nu_fit = 0.0;
  double c_fit = 0.0;      // prefactor of ||grad u||_inf against (1+t)^-nu
  double residual_l2 = 0.0;
  double residual_grad = 0.0;
  bool hypothesis_ok = false;  // both log-space residuals <= 1e-3
};

/// Log-log least squares of ||u(t)||_2 and ||grad u(t)||_inf over the given
/// times; >= 8 samples spanning a decade in (1+t) required.
FlowDecayFit measure_flow_decay(const FlowSpec& spec, std::span<const double> times);

}  // namespace hypermix
