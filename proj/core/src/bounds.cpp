#include "hypermix/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypermix/diagnostics.hpp"

namespace hypermix {

double BoundParams::omega() const { return sphere_measure(dim); }

double BoundParams::effective_beta() const {
  return beta > 0.0 ? beta : default_beta(dim, c_grad_u);
}

double default_beta(int dim, double c_grad_u) {
  double n = dim;
  return 1.0 + std::max(n / 4.0 + 0.5, 0.25 + n / 8.0 + c_grad_u);
}

double energy_lower_bound(const BoundParams& p, double t) {
  if (!(p.alpha > 0.75))
    throw std::domain_error("energy_lower_bound: requires alpha > 3/4");
  if (!(t >= 0.0)) throw std::invalid_argument("energy_lower_bound: t >= 0");
  double n = p.dim;
  return 0.5 * std::sqrt(p.omega() / n) * p.M * std::pow(p.delta, n / 2.0) *
         std::exp(-p.kappa * std::pow(p.delta, 4)) * std::pow(1.0 + t, -n / 8.0);
}

double reference_lower_bound(const BoundParams& p, double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("reference_lower_bound: valid for t >= 1");
  double n = p.dim;
  return std::sqrt(p.omega() / n) * p.M * std::pow(p.delta, n / 2.0) *
         std::exp(-p.kappa * std::pow(p.delta, 4)) * std::pow(1.0 + t, -n / 8.0);
}

double flow_gradient_factor(double c_grad_u, double nu, double t) {
  if (!(nu > 0.0)) throw std::domain_error("flow_gradient_factor: requires nu > 0");
  if (!(c_grad_u >= 0.0) || !(t >= 0.0))
    throw std::invalid_argument("flow_gradient_factor: need c_grad_u >= 0, t >= 0");
  if (nu == 1.0) return 1.0;
  if (nu < 1.0)
    return std::exp(-c_grad_u / (1.0 - nu) * (std::pow(1.0 + t, 1.0 - nu) - 1.0));
  return std::pow(1.0 + t, c_grad_u) *
         std::exp(-c_grad_u / (nu - 1.0) * (1.0 - std::pow(1.0 + t, -(nu - 1.0))));
}

MixingLowerBounds mixing_lower_bounds(const BoundParams& p, double t) {
  if (!std::isfinite(p.fit.c1) || !std::isfinite(p.fit.c2))
    throw std::invalid_argument("mixing_lower_bounds: missing fitted constants c1/c2");
  double n = p.dim;
  double f = flow_gradient_factor(p.c_grad_u, p.nu, t);
  MixingLowerBounds b;
  b.hminus1 = p.fit.c1 * std::pow(1.0 + t, -n / 8.0 + 0.25) * f;
  b.lambda = p.fit.c2 * std::pow(1.0 + t, 0.25) * f;
  return b;
}

double perturbation_exponent(int dim, double alpha) {
  double n = dim;
  if (!(alpha > 1.0 - n / 8.0))
    throw std::domain_error("perturbation_exponent: requires alpha > 1 - n/8");
  if (alpha >= 1.25) return -0.25 - n / 8.0;
  return 0.375 - n / 8.0 - alpha / 2.0;
}

double perturbation_upper_bound(const BoundParams& p, double t) {
  return p.fit.c * std::pow(1.0 + t, perturbation_exponent(p.dim, p.alpha));
}

double gradient_upper_bound(const BoundParams& p, double t) {
  if (!(p.nu > 0.0)) throw std::domain_error("gradient_upper_bound: requires nu > 0");
  double n = p.dim;
  double base = p.fit.c_grad * std::pow(1.0 + t, -n / 8.0 - 0.25);
  if (p.nu == 1.0) return base;
  if (p.nu < 1.0)
    return base * std::exp(p.c_grad_u / (1.0 - p.nu) * (std::pow(1.0 + t, 1.0 - p.nu) - 1.0));
  return base * std::pow(1.0 + t, -p.c_grad_u) *
         std::exp(p.c_grad_u / (p.nu - 1.0) * (1.0 - std::pow(1.0 + t, -(p.nu - 1.0))));
}

double integral_majorant(double s_exp, double epsilon, double t) {
  if (!(s_exp > 0.0)) throw std::domain_error("integral_majorant: requires s > 0");
  if (!(epsilon > 0.0 && epsilon <= 0.1))
    throw std::invalid_argument("integral_majorant: epsilon in (0, 0.1]");
  if (!(t >= 0.0)) throw std::invalid_argument("integral_majorant: t >= 0");
  if (s_exp < 1.0) return std::pow(1.0 + t, 1.0 - s_exp) / (1.0 - s_exp);
  if (s_exp == 1.0) return std::pow(1.0 + t, epsilon) / epsilon;
  return 1.0 / (s_exp - 1.0);
}

RateIteration bootstrap_decay_rates(int dim, double alpha, double gamma0) {
  double n = dim;
  if (!(alpha > (6.0 - n) / 8.0))
    throw std::domain_error("bootstrap_decay_rates: requires alpha > (6-n)/8");
  RateIteration it;
  it.final_rate = n / 8.0;
  double gamma = gamma0;
  it.rates.push_back(gamma);
  // increment n/8 + alpha - 3/4 > 0, so the cap is reached in finitely many steps
  while (alpha + gamma < 0.75) {
    gamma = n / 8.0 - 0.75 + alpha + gamma;
    it.rates.push_back(gamma);
    if (it.rates.size() > 1000000)
      throw std::runtime_error(
          "bootstrap_decay_rates: increment too small to enumerate (alpha barely above the threshold)");
  }
  it.steps = static_cast<int>(it.rates.size());
  return it;
}

double onset_time(const BoundParams& p) {
  if (!(p.alpha > 0.75)) throw std::domain_error("onset_time: requires alpha > 3/4");
  if (!std::isfinite(p.fit.c) || !(p.fit.c > 0.0))
    throw std::invalid_argument("onset_time: missing fitted constant c");
  double n = p.dim;
  double q = p.M * std::pow(p.delta, n / 2.0) * std::exp(-p.kappa * std::pow(p.delta, 4));
  double expo = std::min(p.alpha / 2.0, 0.625) - 0.375;  // > 0 since alpha > 3/4
  double t1 = std::pow(p.fit.c / (2.0 * q), 1.0 / expo) - 1.0;
  return std::max(t1, 0.0);
}

const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::zero: return "zero";
    case LimitClass::constant: return "const";
    case LimitClass::infinity: return "infinity";
  }
  return "?";
}

AsymptoticClass classify_long_time(int dim, double nu, double c_grad_u) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("classify_long_time: n in {2,3}");
  if (!(nu > 0.0)) throw std::invalid_argument("classify_long_time: nu > 0");
  if (!(c_grad_u > 0.0)) throw std::invalid_argument("classify_long_time: c_grad_u > 0");
  AsymptoticClass cls;
  if (nu < 1.0) {
    cls.f_inf = LimitClass::zero;
    cls.g_inf = LimitClass::zero;
    return cls;
  }
  cls.g_inf = LimitClass::infinity;
  if (nu == 1.0) {
    cls.f_inf = dim == 2 ? LimitClass::constant : LimitClass::zero;
    return cls;
  }
  // nu > 1: f bound behaves like (1+t)^{-n/8 + 1/4 + c_grad_u}
  if (dim == 2) {
    cls.f_inf = LimitClass::infinity;
  } else {
    if (c_grad_u < 0.125) cls.f_inf = LimitClass::zero;
    else if (c_grad_u == 0.125) cls.f_inf = LimitClass::constant;
    else cls.f_inf = LimitClass::infinity;
  }
  return cls;
}

}  // namespace hypermix
