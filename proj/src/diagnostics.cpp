#include "qnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qnls {

CondPoho condpoho_check(const Field& u, const PotentialModel& V, double p) {
  const auto& grid = u.grid();
  const double N = grid.dimension();
  const auto w = grid.weights();
  const Field du = radial_derivative(u);
  const auto e = energy(u, V, p);

  CondPoho out;
  out.hardy_constant = 2.0 / (N - 2.0);
  out.i1 = e.dirichlet + std::abs(e.potential) + e.quasilinear + e.nonlinear;
  double u2_r2 = 0.0;
  double u4_r2 = 0.0;
  double du2 = 0.0;
  double u2du2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = grid.node(i);
    const double a = std::abs(u[i]);
    const double g = std::abs(du[i]);
    out.i2 += w[i] * a * g / (1.0 + r);
    out.i3 += w[i] * a * a * a * g / (1.0 + r);
    du2 += w[i] * g * g;
    u2du2 += w[i] * a * a * g * g;
    if (r > 0.0) {
      u2_r2 += w[i] * a * a / (r * r);
      u4_r2 += w[i] * a * a * a * a / (r * r);
    }
  }
  out.holder2 = std::sqrt(u2_r2 * du2);
  out.hardy2 = out.hardy_constant * du2;
  out.holder3 = std::sqrt(u4_r2 * u2du2);
  out.hardy3 = 0.5 * out.hardy_constant * 4.0 * u2du2;
  out.finite = std::isfinite(out.i1) && std::isfinite(out.i2) && std::isfinite(out.i3);
  return out;
}

LinfBound linf_bound(const Field& u) {
  LinfBound out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > out.value) {
      out.value = std::abs(u[i]);
      out.r = u.grid().node(i);
    }
  }
  return out;
}

DecayFit decay_fit(const Field& u, std::pair<double, double> window_fraction) {
  const auto [lo, hi] = window_fraction;
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw std::invalid_argument("decay_fit: window must satisfy 0 <= lo < hi <= 1");
  const auto& grid = u.grid();
  DecayFit fit;
  fit.r_lo = lo * grid.r_max();
  fit.r_hi = hi * grid.r_max();
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = grid.node(i);
    if (r < fit.r_lo || r > fit.r_hi) continue;
    if (!(u[i] > 0.0)) {
      std::ostringstream msg;
      msg << "decay_fit: u(" << r << ") = " << u[i] << " is not positive on the fit window";
      throw std::domain_error(msg.str());
    }
    xs.push_back(r);
    ys.push_back(std::log(u[i]));
  }
  if (xs.size() < 3) throw std::domain_error("decay_fit: fewer than 3 nodes in the fit window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double d = ys[k] - (intercept + slope * xs[k]);
    ss += d * d;
  }
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  fit.fit_residual = std::sqrt(ss / n);
  return fit;
}

double split_eta(double r, double R) {
  if (r <= R) return 1.0;
  if (r >= 2.0 * R) return 0.0;
  const double s = (2.0 * R - r) / R;
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

SplitPair split_cutoff(const Field& u, double R) {
  const auto& grid = u.grid();
  if (!(R > 0.0) || !(2.0 * R < grid.r_max())) throw std::invalid_argument("split_cutoff: need 0 < 2R < r_max");
  std::vector<double> v(u.size());
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    // With 0 <= eta <= 1 one of the two subtractions is exact (Sterbenz), so v + w == u.
    w[i] = u[i] - split_eta(grid.node(i), R) * u[i];
    v[i] = u[i] - w[i];
  }
  std::ostringstream desc;
  desc << "quintic smoothstep: 1 on [0, " << R << "], 0 on [" << 2.0 * R << ", r_max], |eta'| <= " << 1.875 / R;
  return {Field(u.grid_ptr(), std::move(v)), Field(u.grid_ptr(), std::move(w)), R, desc.str()};
}

double annulus_energy(const Field& u, double R, double p) {
  const auto& grid = u.grid();
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = grid.node(i);
    if (r < R || r > 2.0 * R) continue;
    s += w[i] * (u[i] * u[i] + std::pow(std::abs(u[i]), p + 1.0));
    if (i + 1 < u.size() && grid.node(i + 1) <= 2.0 * R) {
      const double d = (u[i + 1] - u[i]) / h[i];
      s += W[i] * d * d * (1.0 + 0.5 * (u[i] * u[i] + u[i + 1] * u[i + 1]));
    }
  }
  return s;
}

SplittingError splitting_energy_error(const Field& u, double R, const PotentialModel& V, double p,
                                      const std::vector<double>& t_values) {
  const auto split = split_cutoff(u, R);
  const Fiber fu(u, V, p);
  const Fiber fv(split.v, V, p);
  const Fiber fw(split.w, V, p);
  const double N = u.grid().dimension();
  SplittingError out;
  out.t_values = t_values;
  out.eps_R = annulus_energy(u, R, p);
  out.C_min = std::numeric_limits<double>::infinity();
  for (double t : t_values) {
    const double err = std::abs(fu.value(t) - fv.value(t) - fw.value(t));
    out.errors.push_back(err);
    if (out.eps_R > 0.0) {
      const double ratio = err / (out.eps_R * (std::pow(t, N) + std::pow(t, N + p + 1.0)));
      out.C = std::max(out.C, ratio);
      out.C_min = std::min(out.C_min, ratio);
    }
  }
  if (!std::isfinite(out.C_min)) out.C_min = 0.0;
  return out;
}

double sphere_fraction_in_ball(int dimension, double r, double y, double R) {
  if (r == 0.0) return y < R ? 1.0 : 0.0;
  if (r + y <= R) return 1.0;
  if (std::abs(r - y) >= R) return 0.0;
  // Points of the sphere at angle theta from the ray are inside when cos(theta) >= c.
  const double c = std::clamp((r * r + y * y - R * R) / (2.0 * r * y), -1.0, 1.0);
  const double theta_c = std::acos(c);
  const int power = dimension - 2;
  auto simpson = [power](double b) {
    constexpr int m = 256;
    const double hh = b / m;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double f = std::pow(std::sin(k * hh), power);
      s += (k == 0 || k == m ? 1.0 : (k % 2 ? 4.0 : 2.0)) * f;
    }
    return s * hh / 3.0;
  };
  if (power == 1) return 0.5 * (1.0 - c);
  return simpson(theta_c) / simpson(M_PI);
}

double vanishing_sup(const Field& u, double R, std::size_t centers, double p) {
  if (!(R > 0.0)) throw std::invalid_argument("vanishing_sup: R must be positive");
  if (centers < 1) throw std::invalid_argument("vanishing_sup: need at least one centre");
  const auto& grid = u.grid();
  const auto w = grid.weights();
  std::vector<double> g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = w[i] * std::pow(std::abs(u[i]), p + 1.0);
  std::vector<double> mass(centers, 0.0);
  const long long count = static_cast<long long>(centers);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < count; ++k) {
    const double y = centers == 1 ? 0.0 : grid.r_max() * static_cast<double>(k) / static_cast<double>(centers - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0.0) continue;
      const double f = sphere_fraction_in_ball(grid.dimension(), grid.node(i), y, R);
      if (f > 0.0) s += f * g[i];
    }
    mass[static_cast<std::size_t>(k)] = s;
  }
  return *std::max_element(mass.begin(), mass.end());
}

double tail_exponent(double p, int dimension) { return (p - 1.0) / (2.0 * (dimension + p + 1.0)); }

std::vector<TailPoint> tail_family(const Field& u, const std::vector<double>& radii, double p) {
  std::vector<TailPoint> out;
  for (double R : radii) {
    const auto split = split_cutoff(u, R);
    out.push_back({R, annulus_energy(u, R, p), x_norms(split.w).d_X_to_zero});
  }
  return out;
}

}  // namespace qnls
