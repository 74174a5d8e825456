#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "mems/grid.hpp"
#include "mems/plate.hpp"

namespace mems::testing {

/// J0 from its power series.
inline double bessel_j0_series(double x) {
  double term = 1.0, sum = 1.0;
  const double q = -0.25 * x * x;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

/// First positive zero of J0 by bisection on [2, 3].
inline double bessel_j01() {
  double a = 2.0, b = 3.0;
  for (int k = 0; k < 200; ++k) {
    const double c = 0.5 * (a + b);
    (bessel_j0_series(a) * bessel_j0_series(c) <= 0.0 ? b : a) = c;
  }
  return 0.5 * (a + b);
}

inline std::shared_ptr<const RadialGrid> radial(int n) { return std::make_shared<const RadialGrid>(n); }

/// (1 - r^2)(a + b r^2 + c r^4) with a, b, c uniform in [-1, 1].
inline Vector random_direction(const RadialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double a = d(rng), b = d(rng), c = d(rng);
  return sample(g, [&](double r) { return (1.0 - r * r) * (a + b * r * r + c * r * r * r * r); });
}

inline Vector bump(const RadialGrid& g, double amp) {
  return sample(g, [amp](double r) { return amp * (1.0 - r * r); });
}

template <class E>
inline double sup(const E& v) { return v.array().abs().maxCoeff(); }

}  // namespace mems::testing
