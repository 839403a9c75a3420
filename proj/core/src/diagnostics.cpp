#include "hypermix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypermix {

double l2_norm(const SpectralField& spec) {
  double s = 0.0;
  for (const auto& c : spec.coeffs) s += std::norm(c);
  return std::sqrt(plancherel_weight(spec.grid) * s);
}

double l2_norm(const RealField& field) {
  double s = 0.0;
  for (double v : field.values) s += v * v;
  return std::sqrt(continuum_factor(field.grid) * s);
}

double grad_norm(const SpectralField& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
    s += spec.grid.wavenumber_sq(i) * std::norm(spec.coeffs[i]);
  return std::sqrt(plancherel_weight(spec.grid) * s);
}

double laplacian_norm(const SpectralField& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    double k2 = spec.grid.wavenumber_sq(i);
    s += k2 * k2 * std::norm(spec.coeffs[i]);
  }
  return std::sqrt(plancherel_weight(spec.grid) * s);
}

double hminus1_norm(const SpectralField& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    double k2 = spec.grid.wavenumber_sq(i);
    if (k2 > 0.0) s += std::norm(spec.coeffs[i]) / k2;
  }
  return std::sqrt(plancherel_weight(spec.grid) * s);
}

double l2_norm_nonzero_modes(const SpectralField& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
    if (spec.grid.wavenumber_sq(i) > 0.0) s += std::norm(spec.coeffs[i]);
  return std::sqrt(plancherel_weight(spec.grid) * s);
}

double filamentation_length(double l2, double hminus1) {
  if (!(l2 > 1e-300)) throw std::domain_error("filamentation_length: ||theta||_2 underflow");
  return hminus1 / l2;
}

double splitting_radius(double beta, double kappa, double t) {
  if (!(beta > 0.0) || !(kappa > 0.0) || !(t >= 0.0))
    throw std::invalid_argument("splitting_radius: need beta,kappa > 0 and t >= 0");
  return std::pow(beta / (2.0 * kappa * (1.0 + t)), 0.25);
}

double low_mode_energy(const SpectralField& spec, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("low_mode_energy: radius must be positive");
  const double r2 = r * r;
  double s = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
    if (spec.grid.wavenumber_sq(i) <= r2) s += std::norm(spec.coeffs[i]);
  return plancherel_weight(spec.grid) * s;
}

double sphere_measure(int dim) {
  if (dim == 2) return 2.0 * M_PI;
  if (dim == 3) return 4.0 * M_PI;
  throw std::invalid_argument("sphere_measure: dimension must be 2 or 3");
}

MixingDiagnostics compute_diagnostics(double t, const SpectralField& theta_hat,
                                      const SpectralField& ref_hat, double beta,
                                      double kappa) {
  MixingDiagnostics d;
  d.t = t;
  d.l2 = l2_norm(theta_hat);
  d.grad_l2 = grad_norm(theta_hat);
  d.hminus1 = hminus1_norm(theta_hat);
  d.lambda = d.l2 > 1e-300 ? d.hminus1 / d.l2 : 0.0;
  d.zero_mode = continuum_factor(theta_hat.grid) * theta_hat.coeffs[0];
  d.low_mode = low_mode_energy(theta_hat, splitting_radius(beta, kappa, t));
  double s = 0.0;
  for (std::size_t i = 0; i < theta_hat.coeffs.size(); ++i)
    s += std::norm(theta_hat.coeffs[i] - ref_hat.coeffs[i]);
  d.eta_l2 = std::sqrt(plancherel_weight(theta_hat.grid) * s);
  return d;
}

PowerLawFit fit_power_law(std::span<const double> times, std::span<const double> values,
                          double window_lo, double window_hi) {
  if (times.size() != values.size())
    throw std::invalid_argument("fit_power_law: times/values size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t = times[i];
    if (t < window_lo || t > window_hi) continue;
    if (!(values[i] > 0.0))
      throw std::domain_error("fit_power_law: non-positive value inside window");
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 8) throw std::invalid_argument("fit_power_law: need >= 8 samples in window");
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*hi - *lo < 0.5 * std::log(10.0))
    throw std::invalid_argument("fit_power_law: window narrower than half a decade");

  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (intercept + fit.exponent * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  fit.count = static_cast<int>(xs.size());
  return fit;
}

}  // namespace hypermix
