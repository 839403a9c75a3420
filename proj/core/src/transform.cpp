#include "hypermix/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace hypermix {

namespace {

// FFTW planning is not thread safe; executing a cached plan on fresh arrays
// is. Plans are created FFTW_UNALIGNED so any buffer can be passed to
// fftw_execute_dft.
class PlanCache {
 public:
  fftw_plan get(int dim, int npts, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(dim, npts, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(dim), npts);
    std::vector<fftw_complex> in(ipow(npts, dim)), out(ipow(npts, dim));
    fftw_plan p = fftw_plan_dft(dim, dims.data(), in.data(), out.data(), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw_plan_dft failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  static std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
  }
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const Grid& grid, int sign, const std::complex<double>* in, std::complex<double>* out) {
  fftw_plan p = plan_cache().get(grid.dim, grid.npts, sign);
  // fftw_complex and std::complex<double> are layout compatible
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

SpectralField forward(const RealField& field) {
  if (field.values.size() != field.grid.size())
    throw std::invalid_argument("forward: field size does not match grid");
  std::vector<std::complex<double>> in(field.values.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = {field.values[i], 0.0};
  SpectralField spec = make_spectral_field(field.grid);
  execute(field.grid, FFTW_FORWARD, in.data(), spec.coeffs.data());
  return spec;
}

RealField inverse(const SpectralField& spec) {
  if (spec.coeffs.size() != spec.grid.size())
    throw std::invalid_argument("inverse: coefficient count does not match grid");
  std::vector<std::complex<double>> out(spec.coeffs.size());
  execute(spec.grid, FFTW_BACKWARD, spec.coeffs.data(), out.data());
  RealField field = make_real_field(spec.grid);
  const double scale = 1.0 / static_cast<double>(spec.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) field.values[i] = out[i].real() * scale;
  return field;
}

std::vector<SpectralField> gradient(const SpectralField& spec) {
  const Grid& g = spec.grid;
  const auto n = static_cast<std::size_t>(g.npts);
  std::vector<SpectralField> grad;
  grad.reserve(static_cast<std::size_t>(g.dim));
  for (int d = 0; d < g.dim; ++d) grad.push_back(make_spectral_field(g));

  std::vector<std::size_t> strides(static_cast<std::size_t>(g.dim));
  std::size_t s = 1;
  for (int d = g.dim - 1; d >= 0; --d) {
    strides[static_cast<std::size_t>(d)] = s;
    s *= n;
  }
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    std::size_t rest = i;
    for (int d = g.dim - 1; d >= 0; --d) {
      std::size_t idx = rest % n;
      rest /= n;
      double xi = g.axis_wavenumbers[idx];
      grad[static_cast<std::size_t>(d)].coeffs[i] =
          std::complex<double>(0.0, xi) * spec.coeffs[i];
    }
  }
  return grad;
}

SpectralField apply_multiplier(const SpectralField& spec, std::span<const double> symbol) {
  if (symbol.size() != spec.coeffs.size())
    throw std::invalid_argument("apply_multiplier: symbol size mismatch");
  for (double v : symbol)
    if (!std::isfinite(v)) throw std::invalid_argument("apply_multiplier: symbol contains NaN/Inf");
  SpectralField out = spec;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= symbol[i];
  return out;
}

void dealias_two_thirds_inplace(SpectralField& spec) {
  const Grid& g = spec.grid;
  const auto n = static_cast<std::size_t>(g.npts);
  const int kmax = g.npts / 3;  // keep |k_j| <= N/3
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    std::size_t rest = i;
    bool cut = false;
    for (int d = 0; d < g.dim; ++d) {
      int k = g.axis_mode(static_cast<int>(rest % n));
      if (std::abs(k) > kmax) {
        cut = true;
        break;
      }
      rest /= n;
    }
    if (cut) spec.coeffs[i] = {0.0, 0.0};
  }
}

SpectralField dealias_two_thirds(const SpectralField& spec) {
  SpectralField out = spec;
  dealias_two_thirds_inplace(out);
  return out;
}

std::vector<double> squared_wavenumbers(const Grid& grid) {
  std::vector<double> out(grid.size());
  const auto n = static_cast<std::size_t>(grid.npts);
  if (grid.dim == 2) {
    std::size_t i = 0;
    for (std::size_t a = 0; a < n; ++a) {
      double wa = grid.axis_wavenumbers[a];
      for (std::size_t b = 0; b < n; ++b, ++i) {
        double wb = grid.axis_wavenumbers[b];
        out[i] = wa * wa + wb * wb;
      }
    }
  } else {
    std::size_t i = 0;
    for (std::size_t a = 0; a < n; ++a) {
      double wa = grid.axis_wavenumbers[a];
      for (std::size_t b = 0; b < n; ++b) {
        double wb = grid.axis_wavenumbers[b];
        for (std::size_t c = 0; c < n; ++c, ++i) {
          double wc = grid.axis_wavenumbers[c];
          out[i] = wa * wa + wb * wb + wc * wc;
        }
      }
    }
  }
  return out;
}

}  // namespace hypermix
