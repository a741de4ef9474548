#include "qnls/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qnls {

namespace {

// Fornberg's recursion for finite-difference weights of derivative `order` at x0
// on arbitrary nodes. Returns weights for the requested order only.
template <std::size_t K>
std::array<double, K> fd_weights(const std::array<double, K>& x, double x0, int order) {
  std::array<std::array<double, K>, 3> c{};  // c[m][j], m <= 2
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < K; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m) {
          c[m][i] = c1 * (m * c[m - 1][i - 1] - c5 * c[m][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int m = mn; m >= 1; --m) {
        c[m][j] = (c4 * c[m][j] - m * c[m - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[order];
}

}  // namespace

RadialGrid::RadialGrid(int dimension, double r_max, std::size_t n, Spacing spacing, double ratio)
    : dimension_(dimension), r_max_(r_max), spacing_(spacing), ratio_(ratio) {
  if (dimension < 3) throw std::invalid_argument("grid: dimension N must be >= 3");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("grid: r_max must be positive");
  if (n < 16) throw std::invalid_argument("grid: need at least 16 nodes, got " + std::to_string(n));
  if (!(ratio >= 1.0)) throw std::invalid_argument("grid: graded ratio must be >= 1");

  const double half_n = 0.5 * dimension;
  sphere_area_ = 2.0 * std::pow(std::numbers::pi, half_n) / std::tgamma(half_n);

  const bool graded = spacing == Spacing::graded && ratio > 1.0;
  const double a = graded ? std::log(ratio) : 0.0;
  const double dxi = 1.0 / static_cast<double>(n - 1);

  nodes_.resize(n);
  std::vector<double> jacobian(n, r_max);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i) * dxi;
    if (graded) {
      const double denom = std::expm1(a);
      nodes_[i] = r_max * std::expm1(a * xi) / denom;
      jacobian[i] = r_max * a * std::exp(a * xi) / denom;
    } else {
      nodes_[i] = r_max * xi;
    }
  }
  nodes_.front() = 0.0;
  nodes_.back() = r_max;

  weights_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double c = 1.0;
    if (i == 0) c = 0.5;
    else if (i == n - 1) c = 3.0 / 8.0;
    else if (i == n - 2) c = 7.0 / 6.0;
    else if (i == n - 3) c = 23.0 / 24.0;
    weights_[i] = c * dxi * jacobian[i] * sphere_area_ * std::pow(nodes_[i], dimension - 1);
  }

  cell_weights_.resize(n - 1);
  cell_widths_.resize(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    cell_widths_[c] = nodes_[c + 1] - nodes_[c];
    cell_weights_[c] = ball_volume(nodes_[c + 1]) - ball_volume(nodes_[c]);
  }
}

double RadialGrid::ball_volume(double radius) const {
  return sphere_area_ * std::pow(radius, dimension_) / dimension_;
}

bool RadialGrid::same_as(const RadialGrid& other) const noexcept {
  if (this == &other) return true;
  return dimension_ == other.dimension_ && nodes_ == other.nodes_;
}

GridPtr build_grid(int dimension, double r_max, std::size_t n, Spacing spacing, double ratio) {
  return std::make_shared<const RadialGrid>(dimension, r_max, n, spacing, ratio);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("field: null grid");
  if (values_.size() != grid_->size()) throw std::invalid_argument("field: value count does not match grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite value");
  }
}

Field Field::zeros(GridPtr grid) {
  const auto n = grid->size();
  return Field(std::move(grid), std::vector<double>(n, 0.0));
}

Field Field::sample(GridPtr grid, const std::function<double(double)>& profile) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile(grid->node(i));
  return Field(std::move(grid), std::move(v));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double factor, Field rhs) { return rhs *= factor; }

void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid().same_as(b.grid())) throw std::invalid_argument("fields live on different grids");
}

double integrate(const RadialGrid& grid, std::span<const double> g) {
  if (g.size() != grid.size()) throw std::invalid_argument("integrate: value count does not match grid");
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += w[i] * g[i];
  return sum;
}

double integrate(const Field& g) { return integrate(g.grid(), g.values()); }

Field radial_derivative(const Field& u) {
  const auto& grid = u.grid();
  const auto r = grid.nodes();
  const std::size_t n = grid.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto c = fd_weights<3>({r[i - 1], r[i], r[i + 1]}, r[i], 1);
    d[i] = c[0] * (u[i - 1] - u[i]) + c[2] * (u[i + 1] - u[i]);
  }
  const auto c = fd_weights<3>({r[n - 3], r[n - 2], r[n - 1]}, r[n - 1], 1);
  d[n - 1] = c[0] * (u[n - 3] - u[n - 1]) + c[1] * (u[n - 2] - u[n - 1]);
  return Field(u.grid_ptr(), std::move(d));
}

Field radial_second_derivative(const Field& u) {
  const auto& grid = u.grid();
  const auto r = grid.nodes();
  const std::size_t n = grid.size();
  std::vector<double> d(n, 0.0);
  {
    const auto c = fd_weights<3>({-r[1], 0.0, r[1]}, 0.0, 2);
    d[0] = (c[0] + c[2]) * (u[1] - u[0]);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto c = fd_weights<3>({r[i - 1], r[i], r[i + 1]}, r[i], 2);
    d[i] = c[0] * (u[i - 1] - u[i]) + c[2] * (u[i + 1] - u[i]);
  }
  const auto c = fd_weights<4>({r[n - 4], r[n - 3], r[n - 2], r[n - 1]}, r[n - 1], 2);
  d[n - 1] = c[0] * (u[n - 4] - u[n - 1]) + c[1] * (u[n - 3] - u[n - 1]) + c[2] * (u[n - 2] - u[n - 1]);
  return Field(u.grid_ptr(), std::move(d));
}

std::vector<double> cell_gradient(const Field& u) {
  const auto h = u.grid().cell_widths();
  std::vector<double> g(h.size());
  for (std::size_t c = 0; c < h.size(); ++c) g[c] = (u[c + 1] - u[c]) / h[c];
  return g;
}

namespace {

struct NormParts {
  double grad_sq = 0.0;         // sum W |delta(u - v)|^2
  double mass = 0.0;            // sum w (u - v)^2
  double square_grad_sq = 0.0;  // sum W |delta(u^2 - v^2)|^2
  double quartic = 0.0;         // sum w (u^2 - v^2)^2
};

// Parts of d_X between u and v (v may be empty for distance to zero).
NormParts x_parts(const Field& u, const Field* v) {
  const auto& grid = u.grid();
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  const std::size_t n = grid.size();
  auto diff = [&](std::size_t i) { return v ? u[i] - (*v)[i] : u[i]; };
  auto sqdiff = [&](std::size_t i) { return v ? u[i] * u[i] - (*v)[i] * (*v)[i] : u[i] * u[i]; };
  NormParts parts;
  for (std::size_t i = 0; i < n; ++i) {
    parts.mass += w[i] * diff(i) * diff(i);
    parts.quartic += w[i] * sqdiff(i) * sqdiff(i);
  }
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const double g = (diff(c + 1) - diff(c)) / h[c];
    const double g2 = (sqdiff(c + 1) - sqdiff(c)) / h[c];
    parts.grad_sq += W[c] * g * g;
    parts.square_grad_sq += W[c] * g2 * g2;
  }
  return parts;
}

}  // namespace

XNorms x_norms(const Field& u) {
  const auto parts = x_parts(u, nullptr);
  XNorms out;
  out.h1_norm = std::sqrt(parts.grad_sq + parts.mass);
  out.h1_of_square = std::sqrt(parts.square_grad_sq + parts.quartic);
  out.d_X_to_zero = out.h1_norm + std::sqrt(parts.square_grad_sq);
  return out;
}

double distance_X(const Field& u, const Field& v) {
  require_same_grid(u, v);
  const auto parts = x_parts(u, &v);
  return std::sqrt(parts.grad_sq + parts.mass) + std::sqrt(parts.square_grad_sq);
}

}  // namespace qnls
