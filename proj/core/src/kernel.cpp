#include "hypermix/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypermix/diagnostics.hpp"

namespace hypermix {

namespace {

// ---------------------------------------------------------------- Bessel ---

// Power series in long double; safe up to z ~ 17 where the largest term is
// ~1e5 and the 64-bit mantissa still leaves ~1e-14 absolute accuracy.
long double j0_series(long double z) {
  long double q = z * z / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-40L) break;
  }
  return sum;
}

long double j1_series(long double z) {
  long double q = z * z / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-40L) break;
  }
  return (z / 2.0L) * sum;
}

// Hankel asymptotic expansion, truncated where the terms stop shrinking.
// Usable to ~1e-13 absolute for z >= 17.
double j_asymptotic(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::abs(term);
  for (int k = 1; k < 40; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * z * k);
    if (std::abs(term) > prev) break;  // divergent tail reached
    prev = std::abs(term);
    if (k % 2 == 1) {
      q += (k % 4 == 1) ? term : -term;
    } else {
      p += (k % 4 == 2) ? -term : term;
    }
    if (std::abs(term) < 1e-18) break;
  }
  double chi = z - (0.5 * nu + 0.25) * M_PI;
  return std::sqrt(2.0 / (M_PI * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

double j0(double z) {
  z = std::abs(z);
  if (z < 17.0) return static_cast<double>(j0_series(z));
  return j_asymptotic(0.0, z);
}

double j1(double z) {
  double az = std::abs(z);
  double v = az < 17.0 ? static_cast<double>(j1_series(az)) : j_asymptotic(1.0, az);
  return z < 0.0 ? -v : v;
}

// g_nu(z) = J_nu(z) / z^nu, entire and even; the profile integrand uses
// these so eta = 0 needs no special casing.
double g_half_neg(double z) {  // nu = -1/2
  return std::sqrt(2.0 / M_PI) * std::cos(z);
}

double g_zero(double z) { return j0(z); }

double g_half(double z) {  // nu = 1/2
  double az = std::abs(z);
  double sinc = az < 1e-4 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
  return std::sqrt(2.0 / M_PI) * sinc;
}

double g_one(double z) {  // nu = 1
  double az = std::abs(z);
  if (az < 17.0) {
    long double q = static_cast<long double>(z) * z / 4.0L;
    long double term = 0.5L, sum = 0.5L;
    for (int k = 1; k < 60; ++k) {
      term *= -q / (static_cast<long double>(k) * (k + 1));
      sum += term;
      if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-40L) break;
    }
    return static_cast<double>(sum);
  }
  return j_asymptotic(1.0, az) / az;
}

double g_three_halves(double z) {  // nu = 3/2
  double az = std::abs(z);
  if (az < 0.1) {
    // (sin z / z - cos z)/z^2 = sum_{k>=1} (-1)^{k+1} 2k z^{2k-2}/(2k+1)!
    double z2 = z * z;
    double z4 = z2 * z2;
    double sum = 1.0 / 3.0 - z2 / 30.0 + z4 / 840.0 - z4 * z2 / 45360.0 +
                 z4 * z4 / 3991680.0 - z4 * z4 * z2 / 518918400.0;
    return std::sqrt(2.0 / M_PI) * sum;
  }
  return std::sqrt(2.0 / M_PI) * (std::sin(z) / z - std::cos(z)) / (z * z);
}

double g_profile(int dim, double z) {
  switch (dim) {
    case 1: return g_half_neg(z);
    case 2: return g_zero(z);
    case 3: return g_half(z);
    case 4: return g_one(z);
    case 5: return g_three_halves(z);
    default:
      throw std::invalid_argument("profile dimension must be in 1..5, got " + std::to_string(dim));
  }
}

// --------------------------------------------------- Gauss-Legendre nodes ---

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    constexpr int n = 16;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
      // Newton iteration on P_16 from the Chebyshev initial guess
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[static_cast<std::size_t>(i)] = x;
      r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

template <class F>
double integrate_panels(F&& f, double a, double b, int panels) {
  const GaussRule& r = gauss16();
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + 0.5 * h * r.x[i]);
    sum += acc * 0.5 * h;
  }
  return sum;
}

template <class F>
double integrate_adaptive(F&& f, double a, double b, int panels0, double abs_tol,
                          const char* what) {
  double prev = integrate_panels(f, a, b, panels0);
  int panels = panels0;
  for (int round = 0; round < 8; ++round) {
    panels *= 2;
    double next = integrate_panels(f, a, b, panels);
    if (std::abs(next - prev) <= abs_tol) return next;
    prev = next;
  }
  throw std::runtime_error(std::string(what) + ": quadrature failed to stabilize to tolerance");
}

// --------------------------------------------------------- cached tables ---

std::mutex cache_mutex;

double envelope_eta_cut(double amp, double rate, double floor) {
  // smallest eta with amp * exp(-rate eta^{4/3}) < floor
  return std::pow(std::log(amp / floor) / rate, 0.75);
}

struct ProfileTable {
  double step = 0.0;
  double eta_max = 0.0;
  std::vector<double> vals;
};

double table_interp(const ProfileTable& tab, double eta) {
  if (eta >= tab.eta_max) return 0.0;
  double u = eta / tab.step;
  auto i = static_cast<std::ptrdiff_t>(u);
  auto n = static_cast<std::ptrdiff_t>(tab.vals.size());
  // 4-point Lagrange on the uniform grid; clamp the stencil at the ends
  std::ptrdiff_t i0 = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
  double s = u - static_cast<double>(i0);
  const double* v = tab.vals.data() + i0;
  double c0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  double c1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  double c2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  double c3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return c0 * v[0] + c1 * v[1] + c2 * v[2] + c3 * v[3];
}

}  // namespace

double bessel_j(double order, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("bessel_j: argument must be >= 0");
  if (order == 0.0) return j0(z);
  if (order == 1.0) return j1(z);
  if (order == 0.5) {
    if (z == 0.0) return 0.0;
    return std::sqrt(2.0 / (M_PI * z)) * std::sin(z);
  }
  if (order == 1.5) {
    if (z == 0.0) return 0.0;
    return std::pow(z, 1.5) * g_three_halves(z);  // = sqrt(2/(pi z)) (sin z / z - cos z)
  }
  throw std::invalid_argument("bessel_j: unsupported order " + std::to_string(order));
}

double profile_f(int dim, double eta, const QuadratureSpec& quad, double abs_tol) {
  if (quad.s_max < 4.0 || quad.base_panels < 64)
    throw std::invalid_argument("profile_f: QuadratureSpec out of contract (s_max >= 4, base_panels >= 64)");
  const double ae = std::abs(eta);
  int panels = std::max(quad.base_panels,
                        static_cast<int>(std::ceil(quad.eta_density * ae)) + 8);
  auto integrand = [dim, eta](double s) {
    return std::exp(-s * s * s * s) * std::pow(s, dim - 1) * g_profile(dim, eta * s);
  };
  // exp(-s^4) underflows to exactly zero beyond s ~ 7, so a larger cutoff
  // only starves the panels of the support
  double upper = std::min(quad.s_max, 8.0);
  return integrate_adaptive(integrand, 0.0, upper, panels, abs_tol, "profile_f");
}

std::pair<double, double> envelope_fit(int dim, double sample_step) {
  static std::map<int, std::pair<double, double>> cache;
  if (sample_step == 0.01) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
  }

  const double lo = 0.5, hi = 8.0;
  std::vector<double> etas, absf;
  for (double e = lo; e <= hi + 1e-12; e += sample_step) {
    etas.push_back(e);
    absf.push_back(std::abs(profile_f(dim, e)));
  }
  double peak = *std::max_element(absf.begin(), absf.end());
  if (!(peak > 1e-300)) throw std::runtime_error("envelope_fit: profile underflows on the fit window");

  // local maxima of |f|; these trace the envelope between the zeros
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < absf.size(); ++i)
    if (absf[i] >= absf[i - 1] && absf[i] >= absf[i + 1] && absf[i] > 1e-250) peaks.push_back(i);
  if (peaks.size() < 3) {
    peaks.clear();
    for (std::size_t i = 0; i < absf.size(); ++i)
      if (absf[i] > 1e-250) peaks.push_back(i);
  }

  // least squares of log|f| against eta^{4/3}
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t i : peaks) {
    double x = std::pow(etas[i], 4.0 / 3.0);
    double y = std::log(absf[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y; n += 1;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double mu = -slope;
  if (!(mu > 0.0)) throw std::runtime_error("envelope_fit: fitted rate not positive");
  double log_amp = (sy + mu * sx) / n;
  double amp = std::exp(log_amp);

  // inflate the amplitude until the envelope dominates a fine grid of [0, 10]
  for (double e = 0.0; e <= 10.0 + 1e-12; e += 0.002) {
    double needed = std::abs(profile_f(dim, e)) * std::exp(mu * std::pow(e, 4.0 / 3.0));
    amp = std::max(amp, needed);
  }
  amp *= 1.0 + 1e-6;  // between-sample slack

  std::pair<double, double> result{amp, mu};
  if (sample_step == 0.01) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(dim, result);
  }
  return result;
}

namespace {

const ProfileTable& profile_table(int dim) {
  static std::map<int, ProfileTable> tables;
  static std::mutex table_mutex;
  {
    std::lock_guard<std::mutex> lock(table_mutex);
    auto it = tables.find(dim);
    if (it != tables.end()) return it->second;
  }
  // build outside the lock; a racing builder loses at emplace and its copy is dropped
  auto [amp, rate] = envelope_fit(dim);
  ProfileTable tab;
  tab.step = 0.005;
  tab.eta_max = envelope_eta_cut(amp, rate, 1e-18);
  auto count = static_cast<std::size_t>(std::ceil(tab.eta_max / tab.step)) + 4;
  tab.vals.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    tab.vals[i] = profile_f(dim, tab.step * static_cast<double>(i));
  std::lock_guard<std::mutex> lock(table_mutex);
  return tables.emplace(dim, std::move(tab)).first->second;
}

}  // namespace

KernelParams kernel_params(int dim) {
  static std::map<int, KernelParams> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
  }
  auto [amp, rate] = envelope_fit(dim);
  double eta_cut = envelope_eta_cut(amp, rate, 1e-20);
  auto radial = [dim](double e) { return profile_f(dim, e) * std::pow(e, dim - 1); };
  double integral = integrate_adaptive(radial, 0.0, eta_cut,
                                       std::max(64, static_cast<int>(2.0 * eta_cut)),
                                       1e-11, "kernel_params");
  KernelParams p;
  p.dim = dim;
  p.alpha_n = 1.0 / (sphere_measure(dim) * integral);
  p.envelope_amp = amp;
  p.envelope_rate = rate;
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(dim, p);
  return p;
}

double kernel_value(int dim, double t, std::span<const double> x,
                    const KernelParams& params, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_value: t must be positive");
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  double eta = std::sqrt(r2) / std::pow(t, 0.25);
  return params.alpha_n * std::pow(t, -dim / 4.0) * profile_f(dim, eta, quad);
}

double recurrence_residual(int dim, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("recurrence_residual: eta >= 0");
  const double h = 1e-4;
  QuadratureSpec quad;
  // the step-division amplifies quadrature error by 1/(2h); integrate tighter
  double fp = profile_f(dim, eta + h, quad, 1e-13);
  double fm = profile_f(dim, eta - h, quad, 1e-13);
  double deriv = (fp - fm) / (2.0 * h);
  return deriv + eta * profile_f(dim + 2, eta, quad, 1e-13);
}

double kernel_lp_exponent(int dim, double p) {
  return -(dim / 4.0) * (1.0 - 1.0 / p);
}

double kernel_lp_norm(int dim, double p, double t) {
  if (!(p >= 1.0)) throw std::invalid_argument("kernel_lp_norm: p must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("kernel_lp_norm: t must be positive");
  KernelParams params = kernel_params(dim);
  const ProfileTable& tab = profile_table(dim);
  double scale = std::pow(t, 0.25);
  double r_max = tab.eta_max * scale;
  auto integrand = [&](double r) {
    double g = params.alpha_n * std::pow(t, -dim / 4.0) * table_interp(tab, r / scale);
    return std::pow(std::abs(g), p) * std::pow(r, dim - 1);
  };
  int panels = std::max(128, static_cast<int>(2.0 * tab.eta_max));
  double integral = integrate_panels(integrand, 0.0, r_max, panels);
  return std::pow(sphere_measure(dim) * integral, 1.0 / p);
}

RealField kernel_convolve(const RealField& field, double kappa_t) {
  if (!(kappa_t > 0.0)) throw std::invalid_argument("kernel_convolve: kappa_t must be positive");
  const Grid& g = field.grid;
  const int n = g.npts;
  const double dx = g.spacing();
  const double scale = std::pow(kappa_t, 0.25);
  KernelParams params = kernel_params(g.dim);

  double eta_half_box = 0.5 * g.length / scale;
  double tail = params.alpha_n * std::pow(kappa_t, -g.dim / 4.0) * params.envelope_amp *
                std::exp(-params.envelope_rate * std::pow(eta_half_box, 4.0 / 3.0));
  if (tail > 1e-14)
    throw std::runtime_error("kernel_convolve: kernel support exceeds the box (envelope " +
                             std::to_string(tail) + " at L/2)");

  const ProfileTable& tab = profile_table(g.dim);
  const double amp = params.alpha_n * std::pow(kappa_t, -g.dim / 4.0);

  // kernel samples on the offset grid, minimal-image distances
  std::vector<double> mind2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double o = i * dx;
    if (o > 0.5 * g.length) o -= g.length;
    mind2[static_cast<std::size_t>(i)] = o * o;
  }
  std::vector<double> kern(g.size());
  if (g.dim == 2) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double r = std::sqrt(mind2[a] + mind2[b]);
        kern[static_cast<std::size_t>(a) * n + b] = amp * table_interp(tab, r / scale);
      }
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double r = std::sqrt(mind2[a] + mind2[b] + mind2[c]);
          kern[(static_cast<std::size_t>(a) * n + b) * n + c] =
              amp * table_interp(tab, r / scale);
        }
  }

  // renormalize to unit discrete mass so the mean is conserved exactly
  double cell = continuum_factor(g);
  long double mass = 0.0L;
  for (double v : kern) mass += v;
  double norm = static_cast<double>(mass) * cell;
  for (double& v : kern) v /= norm;

  RealField out = make_real_field(g);
  if (g.dim == 2) {
    for (int j1 = 0; j1 < n; ++j1)
      for (int j2 = 0; j2 < n; ++j2) {
        double acc = 0.0;
        for (int k1 = 0; k1 < n; ++k1) {
          const double* kr = kern.data() + static_cast<std::size_t>((j1 - k1) & (n - 1)) * n;
          const double* fr = field.values.data() + static_cast<std::size_t>(k1) * n;
          for (int k2 = 0; k2 < n; ++k2) acc += kr[(j2 - k2) & (n - 1)] * fr[k2];
        }
        out.values[static_cast<std::size_t>(j1) * n + j2] = acc * cell;
      }
  } else {
    for (int j1 = 0; j1 < n; ++j1)
      for (int j2 = 0; j2 < n; ++j2)
        for (int j3 = 0; j3 < n; ++j3) {
          double acc = 0.0;
          for (int k1 = 0; k1 < n; ++k1)
            for (int k2 = 0; k2 < n; ++k2) {
              const double* kr = kern.data() +
                  (static_cast<std::size_t>((j1 - k1) & (n - 1)) * n +
                   static_cast<std::size_t>((j2 - k2) & (n - 1))) * n;
              const double* fr =
                  field.values.data() + (static_cast<std::size_t>(k1) * n + k2) * n;
              for (int k3 = 0; k3 < n; ++k3) acc += kr[(j3 - k3) & (n - 1)] * fr[k3];
            }
          out.values[(static_cast<std::size_t>(j1) * n + j2) * n + j3] = acc * cell;
        }
  }
  return out;
}

void tabulate_profile(int dim, double eta_max, double step, std::ostream& out) {
  if (!(step > 0.0) || !(eta_max >= 0.0))
    throw std::invalid_argument("tabulate_profile: need step > 0, eta_max >= 0");
  auto [amp, rate] = envelope_fit(dim);
  out << "eta,f_n,envelope,residual\n";
  char buf[128];
  for (double eta = 0.0; eta <= eta_max + 1e-12; eta += step) {
    double f = profile_f(dim, eta);
    double env = amp * std::exp(-rate * std::pow(eta, 4.0 / 3.0));
    double res = recurrence_residual(dim, eta);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", eta, f, env, res);
    out << buf;
  }
}

}  // namespace hypermix
