#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hypermix/diagnostics.hpp"
#include "hypermix/flows.hpp"
#include "hypermix/snapshot.hpp"
#include "hypermix/transform.hpp"
#include "test_oracles.hpp"

using namespace hypermix;

TEST_CASE("gaussian initial data: norms and continuum transform") {
  Grid g = make_grid(2, 128, 8.0 * M_PI);
  auto [theta0, tr] = gaussian_theta0(g, 2.0, 1.0);

  double l2 = l2_norm(theta0);
  CHECK(l2 * l2 == doctest::Approx(4.0 * M_PI).epsilon(1e-8));
  CHECK(tr.l2_norm() == doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(1e-12));

  SpectralField spec = forward(theta0);
  double zero_mode = continuum_factor(g) * std::abs(spec.coeffs[0]);
  CHECK(zero_mode == doctest::Approx(8.0 * M_PI).epsilon(1e-8));
  CHECK(tr.value_at_zero() == doctest::Approx(8.0 * M_PI).epsilon(1e-12));

  // every mode with |xi| <= 1 carries positive mass
  double cf = continuum_factor(g);
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
    if (g.wavenumber_sq(i) <= 1.0) CHECK(cf * std::abs(spec.coeffs[i]) > 0.0);

  CHECK_THROWS_AS(gaussian_theta0(make_grid(2, 16, 20.0), 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("certified low-mode floor") {
  Grid g = make_grid(2, 128, 8.0 * M_PI);  // delta = 0.5 hits the mode ring exactly
  auto [theta0, tr] = gaussian_theta0(g, 2.0, 1.0);
  SpectralField spec = forward(theta0);

  double m = certify_M(spec, 0.5);
  CHECK(m == doctest::Approx(8.0 * M_PI * std::exp(-0.5)).epsilon(1e-6));

  // just above the first mode the certificate is that mode's amplitude
  double first = certify_M(spec, 0.25);
  CHECK(first == doctest::Approx(tr.amplitude_at(0.25)).epsilon(1e-6));

  // linear in the data
  RealField scaled = theta0;
  for (double& v : scaled.values) v *= 3.0;
  CHECK(certify_M(forward(scaled), 0.5) == doctest::Approx(3.0 * m).epsilon(1e-12));

  // monotone non-increasing in delta
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.25, 0.5, 0.75, 1.0}) {
    double cur = certify_M(spec, delta);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }

  CHECK_THROWS_AS(certify_M(spec, 0.1), std::invalid_argument);
}

TEST_CASE("taylor-green profile") {
  Grid g = make_grid(2, 32, 2.0 * M_PI);
  auto v = taylor_green(g, 1);
  CHECK(divergence_max(v) < 1e-12);

  double l2sq = 0.0;
  for (const auto& comp : v) {
    double c = l2_norm(comp);
    l2sq += c * c;
  }
  CHECK(std::sqrt(l2sq) == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-12));

  FlowSpec spec = make_separable_flow(FlowProfile::taylor_green, g, 1, 1.0, 0.5);
  CHECK(spec.profile_l2 == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(spec.profile_grad_inf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.c_grad_u == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.nu == 0.5);

  Grid g3 = make_grid(3, 16, 2.0 * M_PI);
  auto v3 = taylor_green(g3, 1);
  CHECK(divergence_max(v3) < 1e-12);
  for (double val : v3[2].values) CHECK(val == 0.0);

  CHECK_THROWS_AS(taylor_green(g, 16), std::invalid_argument);
  CHECK_THROWS_AS(taylor_green(g, 0), std::invalid_argument);
}

TEST_CASE("shear profile is divergence-free") {
  Grid g = make_grid(2, 32, 2.0 * M_PI);
  auto v = shear(g, 2);
  CHECK(divergence_max(v) < 1e-12);
  FlowSpec spec = make_separable_flow(FlowProfile::shear, g, 2, 0.7, 1.0);
  CHECK(spec.profile_grad_inf == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spec.c_grad_u == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("separable flow evaluation follows the amplitude schedule") {
  Grid g = make_grid(2, 32, 2.0 * M_PI);
  FlowSpec spec = make_separable_flow(FlowProfile::taylor_green, g, 1, 0.8, 0.875);

  auto u0 = evaluate_flow(spec, 0.0);
  double l2_0 = 0.0;
  for (const auto& comp : u0) {
    double c = l2_norm(comp);
    l2_0 += c * c;
  }
  CHECK(std::sqrt(l2_0) == doctest::Approx(0.8 * spec.profile_l2).epsilon(1e-12));

  auto u15 = evaluate_flow(spec, 15.0);
  double l2_15 = 0.0;
  for (const auto& comp : u15) {
    double c = l2_norm(comp);
    l2_15 += c * c;
  }
  CHECK(std::sqrt(l2_15) / std::sqrt(l2_0) ==
        doctest::Approx(std::pow(2.0, -3.5)).epsilon(1e-12));

  CHECK(flow_max_speed(spec, 15.0) ==
        doctest::Approx(0.8 * spec.profile_max_speed * std::pow(16.0, -0.875)).epsilon(1e-12));
}

TEST_CASE("measured decay exponents recover the schedule") {
  Grid g = make_grid(2, 32, 2.0 * M_PI);
  std::vector<double> times;
  for (int i = 0; i <= 12; ++i) times.push_back(std::pow(10.0, i / 6.0) - 0.5);

  FlowSpec unit_alpha = make_separable_flow(FlowProfile::taylor_green, g, 1, 0.8, 1.0);
  auto fit = measure_flow_decay(unit_alpha, times);
  CHECK(fit.alpha_fit == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.nu_fit == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.c_fit == doctest::Approx(0.8 * unit_alpha.profile_grad_inf).epsilon(1e-10));
  CHECK(fit.hypothesis_ok);

  FlowSpec constant = make_separable_flow(FlowProfile::taylor_green, g, 1, 0.8, 0.0);
  auto cfit = measure_flow_decay(constant, times);
  CHECK(std::abs(cfit.alpha_fit) < 1e-10);
  CHECK(std::abs(cfit.nu_fit) < 1e-10);
  CHECK(cfit.c_fit == doctest::Approx(0.8 * constant.profile_grad_inf).epsilon(1e-10));

  CHECK_THROWS_AS(measure_flow_decay(unit_alpha, std::vector<double>{1, 2, 3}),
                  std::invalid_argument);
}

namespace {

// writes a snapshot-sequence flow u(t) to dir and returns the times
std::vector<double> write_flow_sequence(const std::string& dir, const Grid& g,
                                        const std::function<double(double)>& amp1,
                                        const std::function<double(double)>& amp2,
                                        const std::vector<double>& times) {
  auto v1 = taylor_green(g, 1);
  auto v2 = shear(g, 2);
  std::string manifest = "{\n  \"times\": [";
  std::string components = "  \"components\": [";
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t = times[i];
    std::vector<RealField> u = v1;
    for (std::size_t c = 0; c < u.size(); ++c)
      for (std::size_t j = 0; j < u[c].values.size(); ++j)
        u[c].values[j] = amp1(t) * v1[c].values[j] + amp2(t) * v2[c].values[j];
    char stem[64];
    std::snprintf(stem, sizeof stem, "u%03zu", i);
    std::string sx = std::string(stem) + "_x";
    std::string sy = std::string(stem) + "_y";
    write_snapshot(u[0], dir + "/" + sx, t, "ux");
    write_snapshot(u[1], dir + "/" + sy, t, "uy");
    char tbuf[40];
    std::snprintf(tbuf, sizeof tbuf, "%.17g", t);
    manifest += std::string(i ? ", " : "") + tbuf;
    components += std::string(i ? ", " : "") + "[\"" + sx + "\", \"" + sy + "\"]";
  }
  manifest += "],\n" + components + "]\n}\n";
  std::ofstream(dir + "/manifest.json") << manifest;
  return times;
}

}  // namespace

TEST_CASE("snapshot flows: interpolation and late-window dominance") {
  Grid g = make_grid(2, 32, 2.0 * M_PI);
  std::string dir = oracles::scratch_dir("flowseq");

  // two separable components with decay 0.8 and 2; the slower one dominates late
  std::vector<double> times;
  for (int i = 0; i <= 24; ++i) times.push_back(std::pow(10.0, 1.0 + i / 12.0) - 1.0);
  auto a1 = [](double t) { return std::pow(1.0 + t, -0.8); };
  auto a2 = [](double t) { return std::pow(1.0 + t, -2.0); };
  write_flow_sequence(dir, g, a1, a2, times);

  FlowSpec flow = load_snapshot_flow(dir);

  // evaluating at a manifest time returns that snapshot exactly
  auto u = evaluate_flow(flow, times[3]);
  auto v1 = taylor_green(g, 1);
  auto v2 = shear(g, 2);
  double worst = 0.0;
  for (std::size_t j = 0; j < u[0].values.size(); ++j)
    worst = std::max(worst, std::abs(u[0].values[j] - (a1(times[3]) * v1[0].values[j] +
                                                       a2(times[3]) * v2[0].values[j])));
  CHECK(worst < 1e-14);

  // halfway between two snapshots the field is the linear blend
  double tm = 0.5 * (times[4] + times[5]);
  auto um = evaluate_flow(flow, tm);
  for (std::size_t j : {std::size_t(0), std::size_t(100), std::size_t(500)}) {
    double expect = 0.5 * ((a1(times[4]) + a1(times[5])) * v1[0].values[j] +
                           (a2(times[4]) + a2(times[5])) * v2[0].values[j]);
    CHECK(um[0].values[j] == doctest::Approx(expect).epsilon(1e-12));
  }

  // clamped outside the recorded range
  auto early = evaluate_flow(flow, -5.0);
  double expect0 = a1(times[0]) * v1[0].values[100] + a2(times[0]) * v2[0].values[100];
  CHECK(early[0].values[100] == doctest::Approx(expect0).epsilon(1e-12));

  // fitted decay moves toward the slow exponent as the window moves late
  std::vector<double> late(times.begin() + 12, times.end());
  auto fit_late = measure_flow_decay(flow, late);
  std::vector<double> early_win(times.begin(), times.begin() + 13);
  auto fit_early = measure_flow_decay(flow, early_win);
  CHECK(std::abs(fit_late.alpha_fit - 0.8) < 0.02);
  CHECK(std::abs(fit_late.alpha_fit - 0.8) < std::abs(fit_early.alpha_fit - 0.8));

  std::filesystem::remove_all(dir);
}
