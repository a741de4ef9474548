#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace qnls {

enum class Spacing { uniform, graded };

/// Radial discretization of the ball B(0, r_max) in R^N.
///
/// Nodes satisfy 0 = r_0 < r_1 < ... < r_{n-1} = r_max. Two quadratures live on
/// the grid and every integral in the library goes through one of them:
///
///  * node weights w_i, used for terms that are pointwise in u (V u^2, |u|^{p+1}).
///    Trapezoid in the grid coordinate applied to g(r) |S^{N-1}| r^{N-1}, with a
///    third-order Gregory correction at r_max. At r = 0 the integrand of a smooth
///    radial function has vanishing odd derivatives, so no correction is needed
///    there and w_0 = 0.
///  * cell weights W_c = |B(0, r_{c+1})| - |B(0, r_c)|, the exact shell volumes,
///    used for gradient terms evaluated on cells (staggered differences).
///
/// Graded grids map a uniform coordinate xi in [0, 1] through
/// r(xi) = r_max (e^{a xi} - 1) / (e^a - 1) with a = log(ratio), so the last cell is
/// roughly `ratio` times the first.
class RadialGrid {
 public:
  RadialGrid(int dimension, double r_max, std::size_t n, Spacing spacing = Spacing::uniform,
             double ratio = 1.0);

  int dimension() const noexcept { return dimension_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t cells() const noexcept { return nodes_.size() - 1; }
  Spacing spacing() const noexcept { return spacing_; }
  double ratio() const noexcept { return ratio_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> cell_weights() const noexcept { return cell_weights_; }
  std::span<const double> cell_widths() const noexcept { return cell_widths_; }

  double node(std::size_t i) const { return nodes_[i]; }
  /// |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2).
  double sphere_area() const noexcept { return sphere_area_; }
  double ball_volume(double radius) const;

  bool same_as(const RadialGrid& other) const noexcept;

 private:
  int dimension_;
  double r_max_;
  Spacing spacing_;
  double ratio_;
  double sphere_area_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> cell_weights_;
  std::vector<double> cell_widths_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws std::invalid_argument on N < 3, r_max <= 0, n < 16 or ratio < 1.
GridPtr build_grid(int dimension, double r_max, std::size_t n, Spacing spacing = Spacing::uniform,
                   double ratio = 1.0);

/// Radial profile u(r) sampled at the grid nodes. Even symmetry at r = 0 and
/// zero extension beyond r_max are implied.
class Field {
 public:
  Field(GridPtr grid, std::vector<double> values);

  static Field zeros(GridPtr grid);
  static Field sample(GridPtr grid, const std::function<double(double)>& profile);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double factor, Field rhs);

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

/// Sum_i w_i g_i.
double integrate(const Field& g);
double integrate(const RadialGrid& grid, std::span<const double> g);

/// u'(r): three-point differences in the interior, one-sided second order at
/// r_max, and exactly 0 at r = 0.
Field radial_derivative(const Field& u);

/// u''(r) with the even reflection u(-r) = u(r) at the origin.
Field radial_second_derivative(const Field& u);

/// Difference quotients (u_{c+1} - u_c) / h_c, one per cell.
std::vector<double> cell_gradient(const Field& u);

struct XNorms {
  double h1_norm = 0.0;       ///< (int |grad u|^2 + u^2)^{1/2}
  double h1_of_square = 0.0;  ///< (int |grad u^2|^2 + u^4)^{1/2}
  double d_X_to_zero = 0.0;   ///< ||u||_{H^1} + ||grad u^2||_{L^2}
};

XNorms x_norms(const Field& u);

/// d_X(u, v) = ||u - v||_{H^1} + ||grad u^2 - grad v^2||_{L^2}.
double distance_X(const Field& u, const Field& v);

}  // namespace qnls
