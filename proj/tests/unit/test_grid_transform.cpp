#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include "hypermix/diagnostics.hpp"
#include "hypermix/grid.hpp"
#include "hypermix/transform.hpp"
#include "test_oracles.hpp"

using namespace hypermix;

namespace {

RealField sampled(const Grid& g, const std::function<double(double, double)>& f) {
  RealField out = make_real_field(g);
  std::size_t idx = 0;
  for (int a = 0; a < g.npts; ++a)
    for (int b = 0; b < g.npts; ++b, ++idx) out.values[idx] = f(g.coord(a), g.coord(b));
  return out;
}

}  // namespace

TEST_CASE("make_grid wavenumber layout") {
  Grid g = make_grid(2, 8, 2.0 * M_PI);
  std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
  for (int i = 0; i < 8; ++i) CHECK(g.axis_wavenumbers[i] == doctest::Approx(expect[i]).epsilon(1e-14));
  CHECK(g.wavenumber_sq(0) == 0.0);

  Grid g2 = make_grid(2, 8, 4.0 * M_PI);
  double smallest = 1e300;
  for (std::size_t i = 1; i < g2.size(); ++i)
    smallest = std::min(smallest, std::sqrt(g2.wavenumber_sq(i)));
  CHECK(smallest == doctest::Approx(0.5).epsilon(1e-14));

  Grid g3 = make_grid(3, 16, 100.0);
  smallest = 1e300;
  for (std::size_t i = 1; i < g3.size(); ++i)
    smallest = std::min(smallest, std::sqrt(g3.wavenumber_sq(i)));
  CHECK(smallest == doctest::Approx(2.0 * M_PI / 100.0).epsilon(1e-12));
}

TEST_CASE("make_grid rejects bad parameters") {
  CHECK_THROWS_AS(make_grid(4, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 8, -1.0), std::invalid_argument);
}

TEST_CASE("constant field transforms to the zero mode only") {
  Grid g = make_grid(2, 16, 2.0 * M_PI);
  RealField f = make_real_field(g);
  for (double& v : f.values) v = 3.25;
  SpectralField spec = forward(f);
  CHECK(spec.coeffs[0].real() == doctest::Approx(3.25 * g.size()).epsilon(1e-13));
  for (std::size_t i = 1; i < spec.coeffs.size(); ++i)
    CHECK(std::abs(spec.coeffs[i]) < 1e-10 * g.size());
}

TEST_CASE("sin(x1) has exactly two nonzero coefficients") {
  Grid g = make_grid(2, 8, 2.0 * M_PI);
  RealField f = sampled(g, [](double x, double) { return std::sin(x); });
  SpectralField spec = forward(f);
  int nonzero = 0;
  for (const auto& c : spec.coeffs)
    if (std::abs(c) > 1e-9 * static_cast<double>(g.size())) ++nonzero;
  CHECK(nonzero == 2);
}

TEST_CASE("round trip and Parseval on random fields") {
  for (int npts : {8, 32, 256}) {
    Grid g = make_grid(2, npts, 5.0);
    RealField f = oracles::random_field(g, 17u + static_cast<unsigned>(npts));
    SpectralField spec = forward(f);
    RealField back = inverse(spec);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      worst = std::max(worst, std::abs(back.values[i] - f.values[i]));
      scale = std::max(scale, std::abs(f.values[i]));
    }
    CHECK(worst / scale < 1e-12);

    CHECK(l2_norm(spec) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
    CHECK(hermitian_defect(spec) < 1e-12);
  }
  Grid g3 = make_grid(3, 16, 2.0);
  RealField f3 = oracles::random_field(g3, 99u);
  CHECK(l2_norm(forward(f3)) == doctest::Approx(l2_norm(f3)).epsilon(1e-10));
}

TEST_CASE("gradient of single modes and constants") {
  Grid g = make_grid(2, 16, 2.0 * M_PI);
  RealField f = sampled(g, [](double x, double) { return std::sin(x); });
  auto grad = gradient(forward(f));
  RealField gx = inverse(grad[0]);
  RealField gy = inverse(grad[1]);
  std::size_t idx = 0;
  for (int a = 0; a < g.npts; ++a)
    for (int b = 0; b < g.npts; ++b, ++idx) {
      CHECK(gx.values[idx] == doctest::Approx(std::cos(g.coord(a))).epsilon(1e-12));
      CHECK(std::abs(gy.values[idx]) < 1e-12);
    }

  RealField c = make_real_field(g);
  for (double& v : c.values) v = 2.0;
  for (const auto& comp : gradient(forward(c)))
    for (const auto& coef : comp.coeffs) CHECK(std::abs(coef) < 1e-10);
}

TEST_CASE("spectral gradient of exp(sin x) matches a finite-difference oracle") {
  Grid g = make_grid(2, 64, 2.0 * M_PI);
  auto fn = [](double x) { return std::exp(std::sin(x)); };
  RealField f = sampled(g, [&](double x, double) { return fn(x); });
  RealField gx = inverse(gradient(forward(f))[0]);
  double worst = 0.0;
  for (int a = 0; a < g.npts; ++a) {
    double ref = oracles::fd4(fn, g.coord(a), 1e-2);
    worst = std::max(worst, std::abs(gx.values[static_cast<std::size_t>(a) * g.npts] - ref));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("gradient is exact for resolved trigonometric polynomials") {
  Grid g = make_grid(2, 32, 2.0 * M_PI);
  RealField f = sampled(g, [](double x, double y) {
    return 2.0 * std::sin(3.0 * x) * std::cos(2.0 * y) + 0.5 * std::cos(5.0 * y);
  });
  RealField gx = inverse(gradient(forward(f))[0]);
  std::size_t idx = 0;
  double worst = 0.0;
  for (int a = 0; a < g.npts; ++a)
    for (int b = 0; b < g.npts; ++b, ++idx) {
      double exact = 6.0 * std::cos(3.0 * g.coord(a)) * std::cos(2.0 * g.coord(b));
      worst = std::max(worst, std::abs(gx.values[idx] - exact));
    }
  CHECK(worst < 1e-12 * 6.0);
}

TEST_CASE("apply_multiplier") {
  Grid g = make_grid(2, 16, 2.0 * M_PI);
  RealField f = sampled(g, [](double x, double) { return std::sin(x); });
  SpectralField spec = forward(f);

  std::vector<double> ones(g.size(), 1.0);
  SpectralField same = apply_multiplier(spec, ones);
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
    CHECK(std::abs(same.coeffs[i] - spec.coeffs[i]) == 0.0);

  std::vector<double> biharm(g.size());
  for (std::size_t i = 0; i < biharm.size(); ++i) {
    double k2 = g.wavenumber_sq(i);
    biharm[i] = k2 * k2;
  }
  RealField back = inverse(apply_multiplier(spec, biharm));
  std::size_t idx = 0;
  for (int a = 0; a < g.npts; ++a)
    for (int b = 0; b < g.npts; ++b, ++idx)
      CHECK(back.values[idx] == doctest::Approx(std::sin(g.coord(a))).epsilon(1e-12));

  RealField f2 = sampled(g, [](double x, double) { return std::sin(2.0 * x); });
  SpectralField spec2 = forward(f2);
  std::vector<double> damp(g.size());
  for (std::size_t i = 0; i < damp.size(); ++i) {
    double k2 = g.wavenumber_sq(i);
    damp[i] = std::exp(-k2 * k2);
  }
  RealField damped = inverse(apply_multiplier(spec2, damp));
  idx = 0;
  for (int a = 0; a < g.npts; ++a)
    for (int b = 0; b < g.npts; ++b, ++idx)
      CHECK(damped.values[idx] ==
            doctest::Approx(std::exp(-16.0) * std::sin(2.0 * g.coord(a))).epsilon(1e-10));

  std::vector<double> bad(g.size(), 1.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(apply_multiplier(spec, bad), std::invalid_argument);

  SpectralField filtered = apply_multiplier(forward(oracles::random_field(g, 5u)), damp);
  CHECK(hermitian_defect(filtered) < 1e-12);
}

TEST_CASE("two-thirds dealiasing") {
  Grid g = make_grid(2, 8, 2.0 * M_PI);
  SpectralField spec = make_spectral_field(g);
  for (auto& c : spec.coeffs) c = {1.0, 0.0};
  SpectralField cut = dealias_two_thirds(spec);
  const auto n = static_cast<std::size_t>(g.npts);
  for (std::size_t i = 0; i < cut.coeffs.size(); ++i) {
    int ka = g.axis_mode(static_cast<int>(i / n));
    int kb = g.axis_mode(static_cast<int>(i % n));
    bool keep = std::abs(ka) <= 2 && std::abs(kb) <= 2;
    CHECK(std::abs(cut.coeffs[i]) == (keep ? 1.0 : 0.0));
  }

  SpectralField twice = dealias_two_thirds(cut);
  for (std::size_t i = 0; i < cut.coeffs.size(); ++i)
    CHECK(std::abs(twice.coeffs[i] - cut.coeffs[i]) == 0.0);

  SpectralField rnd = forward(oracles::random_field(g, 7u));
  CHECK(l2_norm(dealias_two_thirds(rnd)) <= l2_norm(rnd) + 1e-14);
}
