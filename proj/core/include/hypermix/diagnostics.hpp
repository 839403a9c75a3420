#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hypermix/grid.hpp"

namespace hypermix {

/// Physical-space L2 norm via Parseval (continuum convention: integral over
/// the box, not a mean).
double l2_norm(const SpectralField& spec);
double l2_norm(const RealField& field);

/// ||grad f||_2, spectral sum weighted by |xi|^2.
double grad_norm(const SpectralField& spec);

/// ||laplacian f||_2, weight |xi|^4. Used by the energy ledger.
double laplacian_norm(const SpectralField& spec);

/// Homogeneous H^-1 norm, weight |xi|^{-2}; the zero mode is excluded.
double hminus1_norm(const SpectralField& spec);

/// L2 norm restricted to nonzero modes.
double l2_norm_nonzero_modes(const SpectralField& spec);

/// Filamentation length lambda = hminus1 / l2.
double filamentation_length(double l2, double hminus1);

/// Shrinking splitting radius r(t) = (beta / (2 kappa (1+t)))^{1/4}.
double splitting_radius(double beta, double kappa, double t);

/// Spectral energy of modes with |xi| <= r (zero mode included),
/// with the continuum measure normalization so low_mode_energy(r=inf)
/// equals l2_norm^2.
double low_mode_energy(const SpectralField& spec, double r);

/// Measure of the (n-1)-sphere: 2*pi for n=2, 4*pi for n=3.
double sphere_measure(int dim);

struct MixingDiagnostics {
  double t = 0.0;
  double l2 = 0.0;
  double grad_l2 = 0.0;
  double hminus1 = 0.0;
  double lambda = 0.0;
  std::complex<double> zero_mode;  // continuum-normalized theta_hat(0)
  double low_mode = 0.0;           // ||theta_hat||^2 over |xi| <= r(t)
  double eta_l2 = 0.0;             // ||theta - T||_2
};

/// All per-snapshot diagnostics. ref_hat is the hyperdiffusion-only
/// reference evolved from the same initial data.
MixingDiagnostics compute_diagnostics(double t, const SpectralField& theta_hat,
                                      const SpectralField& ref_hat, double beta,
                                      double kappa);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // RMS in log space
  int count = 0;
};

/// Least squares of log(value) against log(1+t) over samples with
/// t in [window_lo, window_hi]. Requires >= 8 samples spanning at least
/// half a decade in (1+t); values must be positive.
PowerLawFit fit_power_law(std::span<const double> times, std::span<const double> values,
                          double window_lo, double window_hi);

}  // namespace hypermix
