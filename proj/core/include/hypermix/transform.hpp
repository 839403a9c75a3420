#pragma once

#include <span>
#include <vector>

#include "hypermix/grid.hpp"

namespace hypermix {

/// Unnormalized forward DFT: coeff(k) = sum_j f(x_j) e^{-i xi_k . x_j}.
SpectralField forward(const RealField& field);

/// Inverse DFT with 1/N^n normalization; exact round trip with forward.
RealField inverse(const SpectralField& spec);

/// Per-axis spectral derivative, multiplication by i*xi_j.
std::vector<SpectralField> gradient(const SpectralField& spec);

/// Pointwise product with a real, even-in-xi symbol given per mode.
/// Rejects symbols containing NaN or Inf.
SpectralField apply_multiplier(const SpectralField& spec, std::span<const double> symbol);

/// Zero every coefficient with any |k_j| > N/3 (2/3 rule). Idempotent.
SpectralField dealias_two_thirds(const SpectralField& spec);
void dealias_two_thirds_inplace(SpectralField& spec);

/// |xi|^2 for every mode, in flat row-major order.
std::vector<double> squared_wavenumbers(const Grid& grid);

}  // namespace hypermix
