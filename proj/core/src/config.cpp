#include "hypermix/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hypermix/flows.hpp"
#include "hypermix/grid.hpp"

namespace hypermix {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !s.empty();
}

bool parse_int(const std::string& s, int& out) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (!end || *end != '\0' || s.empty()) return false;
  out = static_cast<int>(v);
  return true;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  char* end = nullptr;
  out = std::strtoull(s.c_str(), &end, 10);
  return end && *end == '\0' && !s.empty();
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "on") { out = true; return true; }
  if (s == "false" || s == "0" || s == "off") { out = false; return true; }
  return false;
}

bool parse_double_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  if (trim(s).empty()) return true;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_double(trim(item), v)) return false;
    out.push_back(v);
  }
  return true;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error("configuration invalid (" + std::to_string(v.size()) + " violations)"),
      violations(std::move(v)) {}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::vector<std::string> errors;
  using Setter = std::function<bool(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"grid.n", [&](const std::string& v) { return parse_int(v, cfg.grid.n); }},
      {"grid.N", [&](const std::string& v) { return parse_int(v, cfg.grid.N); }},
      {"grid.L", [&](const std::string& v) { return parse_double(v, cfg.grid.L); }},
      {"scheme.kappa", [&](const std::string& v) { return parse_double(v, cfg.scheme.kappa); }},
      {"scheme.cfl", [&](const std::string& v) { return parse_double(v, cfg.scheme.cfl); }},
      {"scheme.dealias", [&](const std::string& v) { return parse_bool(v, cfg.scheme.dealias); }},
      {"scheme.step_growth",
       [&](const std::string& v) { return parse_double(v, cfg.scheme.step_growth); }},
      {"initial.kind", [&](const std::string& v) { cfg.initial.kind = v; return true; }},
      {"initial.sigma", [&](const std::string& v) { return parse_double(v, cfg.initial.sigma); }},
      {"initial.amplitude",
       [&](const std::string& v) { return parse_double(v, cfg.initial.amplitude); }},
      {"initial.delta", [&](const std::string& v) { return parse_double(v, cfg.initial.delta); }},
      {"flow.profile", [&](const std::string& v) { cfg.flow.profile = v; return true; }},
      {"flow.a0", [&](const std::string& v) { return parse_double(v, cfg.flow.a0); }},
      {"flow.alpha", [&](const std::string& v) { return parse_double(v, cfg.flow.alpha); }},
      {"flow.m", [&](const std::string& v) { return parse_int(v, cfg.flow.m); }},
      {"flow.snapshot_dir",
       [&](const std::string& v) { cfg.flow.snapshot_dir = v; return true; }},
      {"times.t_end", [&](const std::string& v) { return parse_double(v, cfg.times.t_end); }},
      {"times.sample_ratio",
       [&](const std::string& v) { return parse_double(v, cfg.times.sample_ratio); }},
      {"times.snapshot_times",
       [&](const std::string& v) { return parse_double_list(v, cfg.times.snapshot_times); }},
      {"bounds.beta", [&](const std::string& v) { return parse_double(v, cfg.bounds.beta); }},
      {"bounds.epsilon", [&](const std::string& v) { return parse_double(v, cfg.bounds.epsilon); }},
      {"bounds.fit_train_lo",
       [&](const std::string& v) { return parse_double(v, cfg.bounds.fit_train_lo); }},
      {"bounds.fit_train_hi",
       [&](const std::string& v) { return parse_double(v, cfg.bounds.fit_train_hi); }},
      {"bounds.fit_test_lo",
       [&](const std::string& v) { return parse_double(v, cfg.bounds.fit_test_lo); }},
      {"bounds.fit_test_hi",
       [&](const std::string& v) { return parse_double(v, cfg.bounds.fit_test_hi); }},
      {"output.directory",
       [&](const std::string& v) { cfg.output.directory = v; return true; }},
      {"output.emit_snapshots",
       [&](const std::string& v) { return parse_bool(v, cfg.output.emit_snapshots); }},
      {"seed", [&](const std::string& v) { return parse_u64(v, cfg.seed); }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      errors.push_back(key + ": unknown key");
      continue;
    }
    if (!it->second(value)) errors.push_back(key + ": cannot parse value '" + value + "'");
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config file not readable: " + path});
  return parse_config(in);
}

double diffusive_horizon(const ExperimentConfig& cfg) {
  double len = cfg.grid.L / 4.0;
  return len * len * len * len / cfg.scheme.kappa;
}

namespace {

// whole-space energy prediction for the Gaussian data under pure
// hyperdiffusion. The floor horizon compares the conserved mean against the
// decay law the torus is meant to mimic, which is the continuum integral;
// the discrete lattice sum dies exponentially once the first shell does.
double signal_energy(const ExperimentConfig& cfg, double t) {
  const int n = cfg.grid.n;
  GaussianTransform tr{n, cfg.initial.sigma, cfg.initial.amplitude};
  const double omega = n == 2 ? 2.0 * M_PI : 4.0 * M_PI;
  const int steps = 4000;
  const double diff_scale = std::pow(2.0 * cfg.scheme.kappa * std::max(t, 0.0), 0.25);
  double sum = 0.0;
  if (diff_scale < cfg.initial.sigma) {
    // spectrum cut by the data itself; resolve the Gaussian
    const double r_max = 8.0 / cfg.initial.sigma;
    const double dr = r_max / steps;
    for (int i = 0; i < steps; ++i) {
      double r = (i + 0.5) * dr;
      double f = tr.amplitude_at(r);
      sum += f * f * std::exp(-2.0 * cfg.scheme.kappa * r * r * r * r * t) *
             std::pow(r, n - 1) * dr;
    }
  } else {
    // spectrum cut by the propagator; substitute mu = r * (2 kappa t)^{1/4}
    const double mu_max = 4.0;
    const double dmu = mu_max / steps;
    for (int i = 0; i < steps; ++i) {
      double mu = (i + 0.5) * dmu;
      double f = tr.amplitude_at(mu / diff_scale);
      sum += f * f * std::exp(-mu * mu * mu * mu) * std::pow(mu, n - 1) * dmu;
    }
    sum *= std::pow(diff_scale, -n);
  }
  return std::pow(2.0 * M_PI, -n) * omega * sum;
}

}  // namespace

double floor_horizon(const ExperimentConfig& cfg) {
  GaussianTransform tr{cfg.grid.n, cfg.initial.sigma, cfg.initial.amplitude};
  double floor2 = tr.value_at_zero() * std::pow(cfg.grid.L, -cfg.grid.n / 2.0);
  floor2 *= floor2;
  if (signal_energy(cfg, 0.0) <= floor2) return 0.0;
  double lo = 0.0, hi = 1e12;
  if (signal_energy(cfg, hi) > floor2) return hi;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (signal_energy(cfg, mid) > floor2 ? lo : hi) = mid;
  }
  return lo;
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg, bool override_horizon) {
  std::vector<std::string> v;
  if (cfg.grid.n != 2 && cfg.grid.n != 3) v.push_back("grid.n: must be 2 or 3");
  if (cfg.grid.N < 8 || !power_of_two(cfg.grid.N))
    v.push_back("grid.N: must be a power of two >= 8");
  if (!(cfg.grid.L > 0.0)) v.push_back("grid.L: must be positive");
  if (!(cfg.scheme.kappa > 0.0)) v.push_back("scheme.kappa: must be positive");
  if (!(cfg.scheme.cfl > 0.0 && cfg.scheme.cfl <= 1.0)) v.push_back("scheme.cfl: must be in (0, 1]");
  if (!(cfg.scheme.step_growth > 0.0 && cfg.scheme.step_growth <= 0.1))
    v.push_back("scheme.step_growth: must be in (0, 0.1]");
  if (cfg.initial.kind != "gaussian") v.push_back("initial.kind: only 'gaussian' is supported");
  if (!(cfg.initial.sigma > 0.0)) v.push_back("initial.sigma: must be positive");
  if (cfg.grid.L > 0.0 && cfg.initial.sigma > 0.0 && cfg.grid.L < 12.0 * cfg.initial.sigma)
    v.push_back("initial.sigma: box requires L >= 12 sigma");
  if (cfg.initial.amplitude == 0.0) v.push_back("initial.amplitude: must be nonzero");
  if (cfg.grid.L > 0.0 && !(cfg.initial.delta >= 2.0 * M_PI / cfg.grid.L))
    v.push_back("initial.delta: below the smallest nonzero wavenumber 2*pi/L");

  const bool known_profile = cfg.flow.profile == "zero" || cfg.flow.profile == "taylor_green" ||
                             cfg.flow.profile == "shear" || cfg.flow.profile == "user_snapshot";
  if (!known_profile) v.push_back("flow.profile: unknown profile '" + cfg.flow.profile + "'");
  if (cfg.flow.profile == "taylor_green" || cfg.flow.profile == "shear") {
    if (cfg.flow.m < 1 || cfg.flow.m >= cfg.grid.N / 2)
      v.push_back("flow.m: mode not resolved by the grid");
    if (!(cfg.flow.a0 >= 0.0)) v.push_back("flow.a0: must be >= 0");
    if (!(cfg.flow.alpha >= 0.0)) v.push_back("flow.alpha: must be >= 0");
  }
  if (cfg.flow.profile == "user_snapshot" && cfg.flow.snapshot_dir.empty())
    v.push_back("flow.snapshot_dir: required for user_snapshot flows");

  if (!(cfg.times.t_end > 0.0)) v.push_back("times.t_end: must be positive");
  if (!(cfg.times.sample_ratio > 1.0)) v.push_back("times.sample_ratio: must exceed 1");
  for (double t : cfg.times.snapshot_times)
    if (t < 0.0 || t > cfg.times.t_end) {
      v.push_back("times.snapshot_times: entries must lie in [0, t_end]");
      break;
    }

  if (!(cfg.bounds.epsilon > 0.0 && cfg.bounds.epsilon <= 0.1))
    v.push_back("bounds.epsilon: must be in (0, 0.1]");
  if (cfg.bounds.beta < 0.0) v.push_back("bounds.beta: must be >= 0 (0 selects the default)");
  if (!(cfg.bounds.fit_train_lo < cfg.bounds.fit_train_hi))
    v.push_back("bounds.fit_train_lo: train window is empty");
  if (!(cfg.bounds.fit_test_lo < cfg.bounds.fit_test_hi))
    v.push_back("bounds.fit_test_lo: test window is empty");
  if (!(cfg.bounds.fit_train_hi <= cfg.bounds.fit_test_lo))
    v.push_back("bounds.fit_test_lo: test window must start after the train window");
  if (cfg.times.t_end > 0.0 && cfg.bounds.fit_test_hi > cfg.times.t_end)
    v.push_back("bounds.fit_test_hi: beyond t_end");

  if (!override_horizon && v.empty() && cfg.initial.kind == "gaussian") {
    double dh = diffusive_horizon(cfg);
    if (cfg.times.t_end > dh)
      v.push_back("times.t_end: beyond the diffusive horizon " + fmt(dh) +
                  " ((kappa t)^{1/4} reaches L/4); pass --override-horizon to force");
    double fh = floor_horizon(cfg);
    if (cfg.times.t_end > fh)
      v.push_back("times.t_end: beyond the zero-mode floor horizon " + fmt(fh) +
                  "; pass --override-horizon to force");
  }
  return v;
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["grid.n"] = std::to_string(cfg.grid.n);
  kv["grid.N"] = std::to_string(cfg.grid.N);
  kv["grid.L"] = fmt(cfg.grid.L);
  kv["scheme.kappa"] = fmt(cfg.scheme.kappa);
  kv["scheme.cfl"] = fmt(cfg.scheme.cfl);
  kv["scheme.dealias"] = cfg.scheme.dealias ? "true" : "false";
  kv["scheme.step_growth"] = fmt(cfg.scheme.step_growth);
  kv["initial.kind"] = cfg.initial.kind;
  kv["initial.sigma"] = fmt(cfg.initial.sigma);
  kv["initial.amplitude"] = fmt(cfg.initial.amplitude);
  kv["initial.delta"] = fmt(cfg.initial.delta);
  kv["flow.profile"] = cfg.flow.profile;
  kv["flow.a0"] = fmt(cfg.flow.a0);
  kv["flow.alpha"] = fmt(cfg.flow.alpha);
  kv["flow.m"] = std::to_string(cfg.flow.m);
  kv["flow.snapshot_dir"] = cfg.flow.snapshot_dir;
  std::string snaps;
  for (std::size_t i = 0; i < cfg.times.snapshot_times.size(); ++i) {
    if (i) snaps += ",";
    snaps += fmt(cfg.times.snapshot_times[i]);
  }
  kv["times.t_end"] = fmt(cfg.times.t_end);
  kv["times.sample_ratio"] = fmt(cfg.times.sample_ratio);
  kv["times.snapshot_times"] = snaps;
  kv["bounds.beta"] = fmt(cfg.bounds.beta);
  kv["bounds.epsilon"] = fmt(cfg.bounds.epsilon);
  kv["bounds.fit_train_lo"] = fmt(cfg.bounds.fit_train_lo);
  kv["bounds.fit_train_hi"] = fmt(cfg.bounds.fit_train_hi);
  kv["bounds.fit_test_lo"] = fmt(cfg.bounds.fit_test_lo);
  kv["bounds.fit_test_hi"] = fmt(cfg.bounds.fit_test_hi);
  kv["output.directory"] = cfg.output.directory;
  kv["output.emit_snapshots"] = cfg.output.emit_snapshots ? "true" : "false";
  kv["seed"] = std::to_string(cfg.seed);

  std::string out;
  for (const auto& [k, val] : kv) {
    out += k;
    out += " = ";
    out += val;
    out += "\n";
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::string s = canonical_config(cfg);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace hypermix
