// Test-side oracles, independent of the implementations they check.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "hypermix/grid.hpp"

namespace oracles {

// First-kind Bessel power series summed to machine precision (long double),
// integer or half-integer order. Valid for moderate z; used only where the
// series is well conditioned.
inline double bessel_series(double nu, double z) {
  long double q = static_cast<long double>(z) * z / 4.0L;
  long double term = std::pow(static_cast<long double>(z) / 2.0L, static_cast<long double>(nu)) /
                     std::tgammal(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-25L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Composite Simpson rule.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Fourth-order central difference with an explicit step, evaluating f
// analytically (independent of any grid).
template <class F>
double fd4(F&& f, double x, double h) {
  return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
}

inline hypermix::RealField random_field(const hypermix::Grid& grid, unsigned seed) {
  hypermix::RealField f = hypermix::make_real_field(grid);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : f.values) v = dist(gen);
  return f;
}

// Unique scratch directory under the system temp dir.
std::string scratch_dir(const std::string& tag);

}  // namespace oracles
