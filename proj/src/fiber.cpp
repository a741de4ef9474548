#include "qnls/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qnls/interpolation.hpp"

namespace qnls {

Fiber::Fiber(const Field& u, const PotentialModel& V, double p)
    : grid_(&u.grid()), V_(&V), p_(p), dimension_(u.grid().dimension()) {
  moments_ = kernels::moments(*grid_, u.values(), kernels::sample_potential(*grid_, V), p);
  u_squared_.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) u_squared_[i] = u[i] * u[i];
}

double Fiber::value(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("fiber: t must be positive");
  if (t == 1.0) return energy_from_moments(moments_, p_).total;
  const double N = dimension_;
  const auto dil = kernels::dilated_potential(*grid_, u_squared_, *V_, t);
  return 0.5 * std::pow(t, N) * moments_.dirichlet + 0.5 * std::pow(t, N + 2.0) * (dil.potential + moments_.quasilinear) -
         std::pow(t, N + p_ + 1.0) / (p_ + 1.0) * moments_.nonlinear;
}

double Fiber::derivative(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("fiber: t must be positive");
  if (t == 1.0) return constraint_J_from_moments(moments_, p_, grid_->dimension());
  const double N = dimension_;
  const auto dil = kernels::dilated_potential(*grid_, u_squared_, *V_, t);
  return 0.5 * N * std::pow(t, N - 1.0) * moments_.dirichlet +
         0.5 * (N + 2.0) * std::pow(t, N + 1.0) * (dil.potential + moments_.quasilinear) +
         0.5 * std::pow(t, N + 1.0) * dil.virial -
         (N + p_ + 1.0) / (p_ + 1.0) * std::pow(t, N + p_) * moments_.nonlinear;
}

double fiber_energy(const Field& u, const PotentialModel& V, double p, double t) {
  return Fiber(u, V, p).value(t);
}

double fiber_derivative(const Field& u, const PotentialModel& V, double p, double t) {
  return Fiber(u, V, p).derivative(t);
}

std::size_t FiberScan::sign_changes() const {
  std::size_t changes = 0;
  int last = 0;
  for (double d : fprime_values) {
    const int s = (d > 0.0) - (d < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::string FiberScan::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "t,f,fprime\n";
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    out << t_values[k] << ',' << f_values[k] << ',' << fprime_values[k] << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> log_ladder(double lo, double hi, std::size_t points) {
  std::vector<double> t(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < points; ++k) {
    t[k] = points == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  return t;
}

FiberScan scan_fiber(const Fiber& f, double lo, double hi, std::size_t points) {
  FiberScan scan;
  scan.t_values = log_ladder(lo, hi, points);
  scan.f_values.resize(points);
  scan.fprime_values.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    scan.f_values[k] = f.value(scan.t_values[k]);
    scan.fprime_values[k] = f.derivative(scan.t_values[k]);
  }
  // Discrete concavity of s -> f(s^{1/(N+p+1)}): difference quotients must not increase.
  const double e = f.s_exponent();
  std::vector<double> q;
  double q_scale = 0.0;
  for (std::size_t k = 0; k + 1 < points; ++k) {
    const double ds = std::pow(scan.t_values[k + 1], e) - std::pow(scan.t_values[k], e);
    q.push_back((scan.f_values[k + 1] - scan.f_values[k]) / ds);
    q_scale = std::max(q_scale, std::abs(q.back()));
  }
  scan.s_concave = true;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    if (q[k + 1] > q[k] + 1e-9 * q_scale) scan.s_concave = false;
  }
  return scan;
}

double bisect_in_s(const Fiber& f, double t_lo, double t_hi, double tolerance) {
  const double e = f.s_exponent();
  double s_lo = std::pow(t_lo, e);
  double s_hi = std::pow(t_hi, e);
  for (int it = 0; it < 400 && s_hi - s_lo > tolerance * s_lo; ++it) {
    const double s = 0.5 * (s_lo + s_hi);
    const double d = f.derivative(std::pow(s, 1.0 / e));
    if (d == 0.0) return std::pow(s, 1.0 / e);
    (d > 0.0 ? s_lo : s_hi) = s;
  }
  return std::pow(0.5 * (s_lo + s_hi), 1.0 / e);
}

// Golden-section refinement of a maximum of f on [a, b].
double golden_max(const Fiber& f, double a, double b, double tolerance) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f.value(c);
  double fd = f.value(d);
  for (int it = 0; it < 300 && b - a > tolerance * b; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f.value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f.value(d);
    }
  }
  return 0.5 * (a + b);
}

double global_maximizer(const Fiber& f, const FiberOptions& options) {
  const auto scan = scan_fiber(f, options.global_t_min, options.global_t_max, options.global_points);
  const auto best = std::max_element(scan.f_values.begin(), scan.f_values.end()) - scan.f_values.begin();
  const std::size_t k = static_cast<std::size_t>(best);
  const double a = scan.t_values[k == 0 ? 0 : k - 1];
  const double b = scan.t_values[std::min(k + 1, scan.t_values.size() - 1)];
  if (a < b && scan.fprime_values[k == 0 ? 0 : k - 1] > 0.0 &&
      scan.fprime_values[std::min(k + 1, scan.t_values.size() - 1)] < 0.0) {
    return bisect_in_s(f, a, b, options.tolerance);
  }
  return golden_max(f, a, b, options.tolerance);
}

bool is_zero(const Field& u) {
  return std::all_of(u.values().begin(), u.values().end(), [](double v) { return v == 0.0; });
}

}  // namespace

FiberScan fiber_scan(const Field& u, const PotentialModel& V, double p, double t_min, double t_max,
                     std::size_t points) {
  if (!(t_min > 0.0 && t_min < t_max) || points < 3) throw std::invalid_argument("fiber_scan: need 0 < t_min < t_max and >= 3 points");
  return scan_fiber(Fiber(u, V, p), t_min, t_max, points);
}

FiberMaximum maximize_fiber(const Field& u, const PotentialModel& V, double p, const FiberOptions& options) {
  if (is_zero(u)) throw std::invalid_argument("maximize_fiber: zero field has no fiber maximum");
  const Fiber f(u, V, p);
  FiberMaximum out;

  if (!options.assume_concave) {
    out.warnings.push_back("(V3) not assumed: maximizer taken from a global log-scan; f_u may have several critical points");
    out.t_star = global_maximizer(f, options);
  } else {
    double t_lo = 1.0;
    double t_hi = 1.0;
    int expansions = 0;
    if (f.derivative(1.0) > 0.0) {
      do {
        t_lo = t_hi;
        t_hi *= 2.0;
        if (++expansions > options.max_expansions) throw std::runtime_error("maximize_fiber: no bracket found for f_u'");
      } while (f.derivative(t_hi) > 0.0);
    } else {
      do {
        t_hi = t_lo;
        t_lo *= 0.5;
        if (++expansions > options.max_expansions) throw std::runtime_error("maximize_fiber: no bracket found for f_u'");
      } while (f.derivative(t_lo) <= 0.0);
    }
    out.t_star = bisect_in_s(f, t_lo, t_hi, options.tolerance);
  }

  if (options.scan_points > 0) {
    out.scan = scan_fiber(f, out.t_star / options.scan_span, out.t_star * options.scan_span, options.scan_points);
    if (options.assume_concave && (!out.scan.s_concave || out.scan.sign_changes() != 1)) {
      out.warnings.push_back("fiber scan is not concave in s or f_u' changes sign more than once; using the global maximizer");
      out.t_star = global_maximizer(f, options);
    }
  }
  out.scan.t_star = out.t_star;
  out.f_star = f.value(out.t_star);
  return out;
}

Field scale(const Field& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("scale: t must be positive");
  if (t == 1.0) return u;
  const auto& grid = u.grid();
  const MonotoneCubic interp(grid.nodes(), u.values(), 0.0, 0.0);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = t * interp(grid.node(i) / t);
  return Field(u.grid_ptr(), std::move(out));
}

Projection project_to_M_detailed(const Field& u, const PotentialModel& V, double p, const FiberOptions& options) {
  const auto fm = maximize_fiber(u, V, p, options);
  Projection out{u, fm.t_star, 1.0, 0.0, fm.warnings};
  if (std::abs(fm.t_star - 1.0) <= 1e-12) {
    out.t_star = out.t_used = 1.0;
    out.J_after = constraint_J(u, V, p);
    return out;
  }
  // J of the resampled field differs from the integral path by interpolation error; a few
  // secant steps in t remove it.
  auto J_at = [&](double t, Field& field, double& size) {
    field = scale(u, t);
    const auto m = kernels::moments(field.grid(), field.values(), kernels::sample_potential(field.grid(), V), p);
    size = m.dirichlet + std::abs(m.potential) + m.quasilinear + m.nonlinear;
    return constraint_J_from_moments(m, p, field.grid().dimension());
  };
  double size = 0.0;
  double t1 = fm.t_star;
  Field f1 = u;
  double g1 = J_at(t1, f1, size);
  double t0 = t1 * (1.0 + 1e-6);
  Field f0 = u;
  double g0 = J_at(t0, f0, size);
  for (int it = 0; it < 30 && std::abs(g1) > 1e-13 * size && g1 != g0; ++it) {
    const double t2 = t1 - g1 * (t1 - t0) / (g1 - g0);
    if (!(t2 > 0.0) || std::abs(t2 / fm.t_star - 1.0) > 0.1) break;
    Field f2 = u;
    double g2 = J_at(t2, f2, size);
    if (std::abs(g2) >= std::abs(g1) && it > 2) break;
    t0 = t1;
    g0 = g1;
    t1 = t2;
    g1 = g2;
    f1 = std::move(f2);
  }
  if (std::abs(g1) > 1e-8 * size) {
    std::ostringstream msg;
    msg << "projection left |J| = " << std::abs(g1) << "; the dilated field t = " << t1 << " is cut off by r_max";
    out.warnings.push_back(msg.str());
  }
  out.u = std::move(f1);
  out.t_used = t1;
  out.J_after = g1;
  return out;
}

Field project_to_M(const Field& u, const PotentialModel& V, double p) {
  return project_to_M_detailed(u, V, p).u;
}

}  // namespace qnls
