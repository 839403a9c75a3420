#include "hypermix/flows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hypermix/diagnostics.hpp"
#include "hypermix/snapshot.hpp"
#include "hypermix/transform.hpp"

namespace hypermix {

double GaussianTransform::amplitude_at(double xi_mag) const {
  return amplitude * std::pow(2.0 * M_PI * sigma * sigma, dim / 2.0) *
         std::exp(-0.5 * sigma * sigma * xi_mag * xi_mag);
}

double GaussianTransform::l2_norm() const {
  return amplitude * std::pow(M_PI * sigma * sigma, dim / 4.0);
}

std::pair<RealField, GaussianTransform> gaussian_theta0(const Grid& grid, double sigma,
                                                        double amplitude) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_theta0: sigma must be positive");
  if (grid.length < 12.0 * sigma)
    throw std::invalid_argument("gaussian_theta0: box too small, need L >= 12 sigma");
  RealField f = make_real_field(grid);
  const int n = grid.npts;
  const double xc = 0.5 * grid.length;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> gauss1(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double d = grid.coord(i) - xc;
    gauss1[static_cast<std::size_t>(i)] = std::exp(-d * d * inv2s2);
  }
  std::size_t idx = 0;
  if (grid.dim == 2) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b, ++idx)
        f.values[idx] = amplitude * gauss1[a] * gauss1[b];
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c, ++idx)
          f.values[idx] = amplitude * gauss1[a] * gauss1[b] * gauss1[c];
  }
  return {std::move(f), GaussianTransform{grid.dim, sigma, amplitude}};
}

double certify_M(const SpectralField& theta0_hat, double delta) {
  const Grid& g = theta0_hat.grid;
  double smallest = 2.0 * M_PI / g.length;
  if (!(delta >= smallest))
    throw std::invalid_argument(
        "certify_M: delta is below the smallest nonzero wavenumber 2*pi/L");
  const double cf = continuum_factor(g);
  const double d2 = delta * delta;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta0_hat.coeffs.size(); ++i)
    if (g.wavenumber_sq(i) <= d2) m = std::min(m, cf * std::abs(theta0_hat.coeffs[i]));
  return m;
}

namespace {

void check_mode_resolved(const Grid& grid, int m) {
  if (m < 1 || m >= grid.npts / 2)
    throw std::invalid_argument("flow profile mode m not resolved by the grid");
}

}  // namespace

std::vector<RealField> taylor_green(const Grid& grid, int m) {
  check_mode_resolved(grid, m);
  std::vector<RealField> v;
  for (int d = 0; d < grid.dim; ++d) v.push_back(make_real_field(grid));
  const int n = grid.npts;
  const double k = 2.0 * M_PI * m / grid.length;
  std::vector<double> s(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s[static_cast<std::size_t>(i)] = std::sin(k * grid.coord(i));
    c[static_cast<std::size_t>(i)] = std::cos(k * grid.coord(i));
  }
  std::size_t idx = 0;
  if (grid.dim == 2) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b, ++idx) {
        v[0].values[idx] = s[a] * c[b];
        v[1].values[idx] = -c[a] * s[b];
      }
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e, ++idx) {
          v[0].values[idx] = s[a] * c[b];
          v[1].values[idx] = -c[a] * s[b];
          // third component identically zero: z-independent planar roll
        }
  }
  return v;
}

std::vector<RealField> shear(const Grid& grid, int m) {
  check_mode_resolved(grid, m);
  std::vector<RealField> v;
  for (int d = 0; d < grid.dim; ++d) v.push_back(make_real_field(grid));
  const int n = grid.npts;
  const double k = 2.0 * M_PI * m / grid.length;
  std::size_t idx = 0;
  if (grid.dim == 2) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b, ++idx) v[0].values[idx] = std::sin(k * grid.coord(b));
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e, ++idx) v[0].values[idx] = std::sin(k * grid.coord(b));
  }
  return v;
}

namespace {

double grad_inf_of(const std::vector<RealField>& v) {
  double worst = 0.0;
  for (const auto& comp : v) {
    auto spec = forward(comp);
    for (const auto& dcomp : gradient(spec)) {
      RealField d = inverse(dcomp);
      for (double x : d.values) worst = std::max(worst, std::abs(x));
    }
  }
  return worst;
}

double max_speed_of(const std::vector<RealField>& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v[0].values.size(); ++i) {
    double s2 = 0.0;
    for (const auto& comp : v) s2 += comp.values[i] * comp.values[i];
    worst = std::max(worst, s2);
  }
  return std::sqrt(worst);
}

double l2_of(const std::vector<RealField>& v) {
  double s = 0.0;
  for (const auto& comp : v) {
    double c = l2_norm(comp);
    s += c * c;
  }
  return std::sqrt(s);
}

}  // namespace

FlowSpec zero_flow() { return FlowSpec{}; }

FlowSpec make_separable_flow(FlowProfile profile, const Grid& grid, int m, double a0,
                             double alpha) {
  FlowSpec spec;
  spec.profile = profile;
  switch (profile) {
    case FlowProfile::zero:
      return spec;
    case FlowProfile::taylor_green:
      spec.base = taylor_green(grid, m);
      break;
    case FlowProfile::shear:
      spec.base = shear(grid, m);
      break;
    case FlowProfile::user_snapshot:
      throw std::invalid_argument("make_separable_flow: use load_snapshot_flow for user flows");
  }
  spec.a0 = a0;
  spec.alpha = alpha;
  spec.nu = alpha;  // separable: both decays share the schedule
  spec.profile_l2 = l2_of(spec.base);
  spec.profile_grad_inf = grad_inf_of(spec.base);
  spec.profile_max_speed = max_speed_of(spec.base);
  spec.c_grad_u = a0 * spec.profile_grad_inf;
  if (divergence_max(spec.base) * std::max(1.0, std::abs(a0)) > 1e-10)
    throw std::runtime_error("make_separable_flow: profile is not divergence-free on the grid");
  return spec;
}

FlowSpec load_snapshot_flow(const std::string& dir) {
  std::ifstream js(dir + "/manifest.json");
  if (!js) throw std::runtime_error("load_snapshot_flow: missing " + dir + "/manifest.json");
  nlohmann::json manifest = nlohmann::json::parse(js);
  auto seq = std::make_shared<FlowSnapshotSeq>();
  seq->times = manifest.at("times").get<std::vector<double>>();
  for (const auto& comps : manifest.at("components")) {
    std::vector<RealField> u;
    for (const auto& stem : comps)
      u.push_back(read_snapshot(dir + "/" + stem.get<std::string>()).first);
    seq->velocities.push_back(std::move(u));
  }
  if (seq->times.size() != seq->velocities.size() || seq->times.empty())
    throw std::runtime_error("load_snapshot_flow: manifest times/components mismatch");
  if (!std::is_sorted(seq->times.begin(), seq->times.end()))
    throw std::runtime_error("load_snapshot_flow: times must be ascending");
  for (const auto& u : seq->velocities)
    if (divergence_max(u) > 1e-10)
      throw std::runtime_error("load_snapshot_flow: snapshot velocity is not divergence-free");

  FlowSpec spec;
  spec.profile = FlowProfile::user_snapshot;
  spec.snapshots = seq;
  return spec;
}

std::vector<RealField> evaluate_flow(const FlowSpec& spec, double t) {
  if (spec.profile == FlowProfile::zero)
    throw std::invalid_argument("evaluate_flow: zero flow has no field to evaluate");
  if (spec.profile != FlowProfile::user_snapshot) {
    double a = spec.a0 * std::pow(1.0 + t, -spec.alpha);
    std::vector<RealField> u = spec.base;
    for (auto& comp : u)
      for (double& x : comp.values) x *= a;
    return u;
  }
  const FlowSnapshotSeq& seq = *spec.snapshots;
  if (t <= seq.times.front()) return seq.velocities.front();
  if (t >= seq.times.back()) return seq.velocities.back();
  auto hi = std::upper_bound(seq.times.begin(), seq.times.end(), t);
  std::size_t i1 = static_cast<std::size_t>(hi - seq.times.begin());
  std::size_t i0 = i1 - 1;
  double w = (t - seq.times[i0]) / (seq.times[i1] - seq.times[i0]);
  std::vector<RealField> u = seq.velocities[i0];
  for (std::size_t c = 0; c < u.size(); ++c)
    for (std::size_t i = 0; i < u[c].values.size(); ++i)
      u[c].values[i] += w * (seq.velocities[i1][c].values[i] - u[c].values[i]);
  return u;
}

double flow_max_speed(const FlowSpec& spec, double t) {
  if (spec.profile == FlowProfile::zero) return 0.0;
  if (spec.profile != FlowProfile::user_snapshot)
    return std::abs(spec.a0) * std::pow(1.0 + t, -spec.alpha) * spec.profile_max_speed;
  return max_speed_of(evaluate_flow(spec, t));
}

double divergence_max(const std::vector<RealField>& u) {
  SpectralField div = make_spectral_field(u[0].grid);
  for (std::size_t d = 0; d < u.size(); ++d) {
    auto comp_grad = gradient(forward(u[d]));
    for (std::size_t i = 0; i < div.coeffs.size(); ++i)
      div.coeffs[i] += comp_grad[d].coeffs[i];
  }
  RealField divx = inverse(div);
  double worst = 0.0;
  for (double v : divx.values) worst = std::max(worst, std::abs(v));
  return worst;
}

FlowDecayFit measure_flow_decay(const FlowSpec& spec, std::span<const double> times) {
  if (times.size() < 8)
    throw std::invalid_argument("measure_flow_decay: need >= 8 sample times");
  auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  if (std::log10((1.0 + *hi) / (1.0 + *lo)) < 1.0)
    throw std::invalid_argument("measure_flow_decay: times must span a decade in (1+t)");

  std::vector<double> ts(times.begin(), times.end());
  std::vector<double> l2s, grads;
  for (double t : ts) {
    auto u = evaluate_flow(spec, t);
    l2s.push_back(l2_of(u));
    grads.push_back(grad_inf_of(u));
    if (!(l2s.back() > 0.0) || !(grads.back() > 0.0))
      throw std::domain_error("measure_flow_decay: degenerate (zero-norm) sample");
  }
  auto fit_l2 = fit_power_law(ts, l2s, *lo, *hi);
  auto fit_grad = fit_power_law(ts, grads, *lo, *hi);
  FlowDecayFit out;
  out.alpha_fit = -fit_l2.exponent;
  out.nu_fit = -fit_grad.exponent;
  out.c_fit = fit_grad.prefactor;
  out.residual_l2 = fit_l2.residual;
  out.residual_grad = fit_grad.residual;
  out.hypothesis_ok = fit_l2.residual <= 1e-3 && fit_grad.residual <= 1e-3;
  return out;
}

}  // namespace hypermix
