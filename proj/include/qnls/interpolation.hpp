#pragma once

#include <optional>
#include <span>
#include <vector>

namespace qnls {

/// Fritsch-Carlson monotone piecewise cubic Hermite interpolant (PCHIP).
/// Evaluation outside [x_0, x_{n-1}] returns `outside`.
class MonotoneCubic {
 public:
  /// `left_slope` pins the derivative at x_0 (0 for profiles even about r = 0).
  MonotoneCubic(std::span<const double> x, std::span<const double> y,
                std::optional<double> left_slope = std::nullopt, double outside = 0.0);

  double operator()(double xq) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
  double outside_;
};

}  // namespace qnls
