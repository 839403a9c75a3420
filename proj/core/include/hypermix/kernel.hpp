#pragma once

#include <iosfwd>
#include <span>
#include <utility>

#include "hypermix/grid.hpp"

namespace hypermix {

/// Self-similar radial kernel G(t,x) = alpha_n t^{-n/4} f_n(|x| t^{-1/4})
/// together with its fitted stretched-exponential envelope
/// |f_n(eta)| <= K_n exp(-mu_n eta^{4/3}).
struct KernelParams {
  int dim = 0;
  double alpha_n = 0.0;       // normalization, integral of G over R^n equals 1
  double envelope_amp = 0.0;  // K_n
  double envelope_rate = 0.0; // mu_n
};

struct QuadratureSpec {
  double s_max = 6.0;      // exp(-s^4) is far below underflow beyond this
  int base_panels = 64;
  double eta_density = 2.0;  // extra panels per unit of eta (oscillation)
};

/// First-kind Bessel function for the orders the radial profiles need:
/// 0, 1/2, 1 and 3/2. Half-integer orders use their closed trigonometric
/// forms with the z -> 0 limits handled.
double bessel_j(double order, double z);

/// Radial profile f_n(eta), n in {1,...,5}, by adaptive panel-doubling
/// Gauss-Legendre quadrature of exp(-s^4) s^{n-1} (J_nu(eta s)/(eta s)^nu)
/// (nu = (n-2)/2), which is smooth through eta = 0. Throws if panel
/// doubling fails to stabilize to abs_tol.
double profile_f(int dim, double eta, const QuadratureSpec& quad = {},
                 double abs_tol = 1e-12);

/// Fitted (K_n, mu_n): least squares of log|f_n| against eta^{4/3} at the
/// peaks of |f_n| over eta in [0.5, 8], then K_n inflated until the envelope
/// dominates every sample of a fine grid on [0, 10]. Cached per dimension
/// at the default sample step.
std::pair<double, double> envelope_fit(int dim, double sample_step = 0.01);

/// alpha_n plus envelope, calibrated once per dimension and cached.
KernelParams kernel_params(int dim);

/// G(t, x) for t > 0.
double kernel_value(int dim, double t, std::span<const double> x,
                    const KernelParams& params, const QuadratureSpec& quad = {});

/// f_n'(eta) + eta f_{n+2}(eta) with the derivative taken by central
/// differences (step 1e-4), independent of the identity it checks.
double recurrence_residual(int dim, double eta);

/// ||G(t)||_p by radial quadrature, 1 <= p < inf, t > 0.
double kernel_lp_norm(int dim, double p, double t);

/// Predicted scaling exponent of ||G(t)||_p, i.e. -(n/4)(1 - 1/p).
double kernel_lp_exponent(int dim, double p);

/// Periodized real-space convolution with G(kappa_t, .) sampled on the
/// grid (direct sum, no transforms). The sampled kernel is renormalized to
/// unit discrete mass. Throws if the envelope at distance L/2 exceeds 1e-14.
RealField kernel_convolve(const RealField& field, double kappa_t);

/// CSV rows "eta,f_n,envelope,residual" for eta = 0, step, ..., eta_max.
void tabulate_profile(int dim, double eta_max, double step, std::ostream& out);

}  // namespace hypermix
