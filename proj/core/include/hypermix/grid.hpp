#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hypermix {

/// Uniform periodic grid on the cube [0, L)^n, n = 2 or 3, N points per axis.
/// Axis wavenumbers are (2*pi/L)*k for integer k in [-N/2, N/2), stored in
/// DFT order (k = 0, 1, ..., N/2-1, -N/2, ..., -1) so index 0 is the zero mode.
struct Grid {
  int dim = 0;
  int npts = 0;
  double length = 0.0;
  std::vector<double> axis_wavenumbers;

  double spacing() const { return length / npts; }
  std::size_t size() const;

  /// Signed integer wavenumber of an index along one axis.
  int axis_mode(int idx) const { return idx < npts / 2 ? idx : idx - npts; }

  /// |xi|^2 at a flat row-major index.
  double wavenumber_sq(std::size_t flat) const;

  /// Flat index of the mode -k when flat addresses mode k.
  std::size_t conjugate_index(std::size_t flat) const;

  /// Physical coordinate of grid point along one axis.
  double coord(int idx) const { return spacing() * idx; }
};

Grid make_grid(int dim, int npts, double length);

/// Scalar field sampled on the grid, row-major.
struct RealField {
  Grid grid;
  std::vector<double> values;
};

/// Complex Fourier coefficients, unnormalized-sum convention, indexed like
/// the grid wavenumbers. Hermitian symmetry is an invariant when the field
/// represents a real scalar, not a storage constraint.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;
};

RealField make_real_field(const Grid& grid);
SpectralField make_spectral_field(const Grid& grid);

bool same_grid(const Grid& a, const Grid& b);

/// Plancherel weight: ||f||_2^2 = weight * sum |coeff|^2 for the
/// unnormalized-sum transform, matching the physical-space quadrature
/// dx^n * sum f^2.
double plancherel_weight(const Grid& grid);

/// dx^n, the factor turning a DFT coefficient into the continuum transform
/// integral(f e^{-i xi.x} dx) sampled at a grid wavenumber.
double continuum_factor(const Grid& grid);

/// Max |coeff(-k) - conj(coeff(k))| over all modes, relative to max |coeff|.
double hermitian_defect(const SpectralField& spec);

}  // namespace hypermix
