#pragma once

#include <string>
#include <vector>

namespace hypermix {

/// Fitted prefactors standing in for the existential constants of the decay
/// estimates. The default workflow fits them on an early-time window and
/// judges the bounds on a disjoint late-time window.
struct BoundConstants {
  double c = 1.0;       // perturbation upper-bound prefactor (also sets the onset time)
  double c_grad = 1.0;  // gradient upper-bound prefactor
  double c1 = 1.0;      // H^-1 lower-bound prefactor
  double c2 = 1.0;      // lambda lower-bound prefactor
  double A = 1.0;       // energy upper-bound prefactor
};

struct BoundParams {
  int dim = 2;
  double kappa = 1.0;
  double M = 1.0;      // certified floor of |theta0_hat| on |xi| <= delta
                       // (Plancherel-unitary transform normalization)
  double delta = 1.0;  // low-mode radius
  double alpha = 1.0;  // L2 decay exponent of the flow
  double nu = 1.0;     // sup-norm gradient decay exponent of the flow
  double c_grad_u = 0.0;
  double beta = 0.0;     // splitting exponent; 0 means "use default_beta"
  double epsilon = 0.01; // regularizes the log branch of the integral majorant
  BoundConstants fit;

  double omega() const;           // measure of the (n-1)-sphere
  double effective_beta() const;  // beta, or the default when unset
};

/// Default splitting exponent strictly above every floor the estimates
/// impose: 1 + max(n/4 + 1/2, 1/4 + n/8 + c_grad_u).
double default_beta(int dim, double c_grad_u);

/// Lower bound on ||theta(t)||_2 for alpha > 3/4:
///   (omega^{1/2} / (2 n^{1/2})) M delta^{n/2} e^{-kappa delta^4} (1+t)^{-n/8}.
double energy_lower_bound(const BoundParams& p, double t);

/// Lower bound on the pure-hyperdiffusion reference for t >= 1; exactly
/// twice energy_lower_bound.
double reference_lower_bound(const BoundParams& p, double t);

/// Flow-gradient history factor f(t); equals 1 at t = 0 in every branch.
double flow_gradient_factor(double c_grad_u, double nu, double t);

struct MixingLowerBounds {
  double hminus1 = 0.0;  // c1 (1+t)^{-n/8+1/4} f(t)
  double lambda = 0.0;   // c2 (1+t)^{1/4} f(t)
};
MixingLowerBounds mixing_lower_bounds(const BoundParams& p, double t);

/// Decay exponent of the perturbation bound; two branches split at
/// alpha = 5/4, continuous across the seam. Requires alpha > 1 - n/8.
double perturbation_exponent(int dim, double alpha);

/// Upper bound c (1+t)^{perturbation_exponent} on ||theta - T||_2.
double perturbation_upper_bound(const BoundParams& p, double t);

/// Upper bound on ||grad theta(t)||_2, with the Gronwall factor branching
/// on nu versus 1.
double gradient_upper_bound(const BoundParams& p, double t);

/// Majorant of the integral of (1+s)^{-s_exp} over [0, t]:
///   s < 1: (1+t)^{1-s}/(1-s);  s = 1: (1+t)^eps / eps;  s > 1: 1/(s-1).
double integral_majorant(double s_exp, double epsilon, double t);

struct RateIteration {
  std::vector<double> rates;  // gamma_0, gamma_1, ... until the dichotomy caps
  double final_rate = 0.0;    // n/8
  int steps = 0;
};

/// Bootstrap iteration gamma_{j+1} = n/8 - 3/4 + alpha + gamma_j, capped at
/// the terminal rate n/8 once alpha + gamma_j >= 3/4. Requires
/// alpha > (6-n)/8 so the sequence increases.
RateIteration bootstrap_decay_rates(int dim, double alpha, double gamma0 = 0.0);

/// Time after which the explicit energy lower bound beats the perturbation:
/// solves M delta^{n/2} e^{-kappa delta^4} = (c/2)(1+t1)^{3/8 - min(alpha/2, 5/8)},
/// clamped at zero. Requires alpha > 3/4.
double onset_time(const BoundParams& p);

enum class LimitClass { zero, constant, infinity };
const char* to_string(LimitClass c);

struct AsymptoticClass {
  LimitClass f_inf = LimitClass::zero;  // limit of the H^-1 lower bound
  LimitClass g_inf = LimitClass::zero;  // limit of the lambda lower bound
};

/// Long-time classification of the two mixing lower bounds, including the
/// c_grad_u trichotomy at 1/8 for n = 3, nu > 1.
AsymptoticClass classify_long_time(int dim, double nu, double c_grad_u);

}  // namespace hypermix
