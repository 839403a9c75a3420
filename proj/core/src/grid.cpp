#include "hypermix/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hypermix {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(npts);
  return s;
}

double Grid::wavenumber_sq(std::size_t flat) const {
  double s = 0.0;
  auto n = static_cast<std::size_t>(npts);
  for (int d = dim - 1; d >= 0; --d) {
    double w = axis_wavenumbers[flat % n];
    s += w * w;
    flat /= n;
  }
  return s;
}

std::size_t Grid::conjugate_index(std::size_t flat) const {
  auto n = static_cast<std::size_t>(npts);
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int d = dim - 1; d >= 0; --d) {
    std::size_t idx = flat % n;
    std::size_t conj = idx == 0 ? 0 : n - idx;
    out += conj * stride;
    stride *= n;
    flat /= n;
  }
  return out;
}

Grid make_grid(int dim, int npts, double length) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("make_grid: dimension must be 2 or 3, got " + std::to_string(dim));
  if (npts < 8 || !power_of_two(npts))
    throw std::invalid_argument("make_grid: N must be a power of two >= 8, got " + std::to_string(npts));
  if (!(length > 0.0))
    throw std::invalid_argument("make_grid: box length must be positive");
  Grid g;
  g.dim = dim;
  g.npts = npts;
  g.length = length;
  g.axis_wavenumbers.resize(npts);
  const double base = 2.0 * M_PI / length;
  for (int i = 0; i < npts; ++i) g.axis_wavenumbers[i] = base * g.axis_mode(i);
  return g;
}

RealField make_real_field(const Grid& grid) {
  RealField f;
  f.grid = grid;
  f.values.assign(grid.size(), 0.0);
  return f;
}

SpectralField make_spectral_field(const Grid& grid) {
  SpectralField f;
  f.grid = grid;
  f.coeffs.assign(grid.size(), {0.0, 0.0});
  return f;
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.dim == b.dim && a.npts == b.npts && a.length == b.length;
}

double plancherel_weight(const Grid& grid) {
  // dx^n / N^n = L^n / N^{2n}
  double w = 1.0;
  for (int d = 0; d < grid.dim; ++d) w *= grid.length / (static_cast<double>(grid.npts) * grid.npts);
  return w;
}

double continuum_factor(const Grid& grid) {
  double w = 1.0;
  for (int d = 0; d < grid.dim; ++d) w *= grid.spacing();
  return w;
}

double hermitian_defect(const SpectralField& spec) {
  double max_abs = 0.0;
  for (const auto& c : spec.coeffs) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    std::size_t j = spec.grid.conjugate_index(i);
    worst = std::max(worst, std::abs(spec.coeffs[i] - std::conj(spec.coeffs[j])));
  }
  return worst / max_abs;
}

}  // namespace hypermix
