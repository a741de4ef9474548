#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "qnls/grid.hpp"

namespace qnls::testing {

inline Field gaussian(const GridPtr& g, double width = 1.0, double amplitude = 1.0) {
  return Field::sample(g, [=](double r) { return amplitude * std::exp(-r * r / (width * width)); });
}

/// Sum of 1 to 3 Gaussians with random amplitudes and widths, pinned to 0 at r_max.
inline Field random_mixture(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 3);
  std::uniform_real_distribution<double> amp(0.5, 3.0);
  std::uniform_real_distribution<double> width(0.6, 2.0);
  std::uniform_real_distribution<double> centre(0.0, 1.0);
  const int k = terms(rng);
  std::vector<double> a(k), w(k), c(k);
  for (int j = 0; j < k; ++j) {
    a[j] = amp(rng);
    w[j] = width(rng);
    c[j] = centre(rng);
  }
  auto f = Field::sample(g, [&](double r) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += a[j] * (std::exp(-std::pow((r - c[j]) / w[j], 2)) + std::exp(-std::pow((r + c[j]) / w[j], 2)));
    return s;
  });
  f[f.size() - 1] = 0.0;
  return f;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline constexpr double pi = std::numbers::pi;

}  // namespace qnls::testing
