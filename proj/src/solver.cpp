#include "qnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qnls/interpolation.hpp"

namespace qnls {

namespace {

Field read_profile(const GridPtr& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("init file not readable: " + path);
  std::vector<double> r;
  std::vector<double> u;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double a = 0.0;
    double b = 0.0;
    if (!(row >> a >> b)) throw std::invalid_argument("init file: malformed row '" + line + "'");
    r.push_back(a);
    u.push_back(b);
  }
  if (r.size() < 2) throw std::invalid_argument("init file: needs at least two rows");
  const MonotoneCubic interp(r, u, 0.0, 0.0);
  return Field::sample(grid, [&](double x) { return interp(x); });
}

// Half-maximum radius: where |u| first drops below max|u| / 2.
double decay_length(const Field& u) {
  double peak = 0.0;
  for (double v : u.values()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const auto& grid = u.grid();
  std::size_t top = 0;
  while (std::abs(u[top]) < peak) ++top;
  for (std::size_t i = top; i < u.size(); ++i) {
    if (std::abs(u[i]) < 0.5 * peak) return grid.node(i);
  }
  return grid.r_max();
}

}  // namespace

Field initial_field(const GridPtr& grid, const InitSpec& init) {
  switch (init.kind) {
    case InitSpec::Kind::gaussian: {
      if (!(init.width > 0.0)) throw std::invalid_argument("init width must be positive");
      const double w2 = init.width * init.width;
      return Field::sample(grid, [w2](double r) { return std::exp(-r * r / w2); });
    }
    case InitSpec::Kind::bump: {
      if (!(init.radius > 0.0)) throw std::invalid_argument("init radius must be positive");
      const double R = init.radius;
      return Field::sample(grid, [R](double r) {
        const double x = r / R;
        return x < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
      });
    }
    case InitSpec::Kind::file:
      return read_profile(grid, init.path);
  }
  throw std::invalid_argument("unknown init kind");
}

namespace {

Field pin_boundary(Field u) {
  u[u.size() - 1] = 0.0;
  return u;
}

}  // namespace

std::vector<Field> test_basis(const GridPtr& grid) {
  constexpr std::size_t half = 4;
  const std::size_t n = grid->size();
  std::vector<Field> basis;
  for (std::size_t c = 0; c + half <= n - 1; c += 4) {
    std::vector<double> phi(n, 0.0);
    for (std::size_t i = (c >= half ? c - half + 1 : 0); i < c + half; ++i) {
      const double x = std::cos(M_PI * (static_cast<double>(i) - static_cast<double>(c)) / (2.0 * half));
      phi[i] = x * x;
    }
    basis.emplace_back(grid, std::move(phi));
  }
  return basis;
}

double h1_norm(const Field& phi) {
  const auto& grid = phi.grid();
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    s += w[i] * phi[i] * phi[i];
    if (i + 1 < phi.size()) {
      const double d = (phi[i + 1] - phi[i]) / h[i];
      s += W[i] * d * d;
    }
  }
  return std::sqrt(s);
}

namespace {

double weak_residual_from_gradient(const Field& u, std::span<const double> grad,
                                   const std::vector<Field>& basis) {
  double worst = 0.0;
  for (const auto& phi : basis) {
    double s = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (phi[i] != 0.0) s += grad[i] * phi[i];
    }
    worst = std::max(worst, std::abs(s) / h1_norm(phi));
  }
  const double un = h1_norm(u);
  if (un > 0.0) worst = std::max(worst, std::abs(kernels::dot(grad, u.values())) / un);
  return worst;
}

}  // namespace

double weak_residual(const Field& u, const PotentialModel& V, double p) {
  const auto grad = energy_gradient(u, V, p);
  const double un = h1_norm(u);
  if (un == 0.0) return 0.0;
  return weak_residual_from_gradient(u, grad, test_basis(u.grid_ptr())) / un;
}

std::vector<double> precondition(const RadialGrid& grid, std::span<const double> rhs) {
  const std::size_t n = grid.size();
  if (rhs.size() != n) throw std::invalid_argument("precondition: size mismatch");
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  // Unknowns 0..n-2; node n-1 is pinned to 0.
  const std::size_t m = n - 1;
  std::vector<double> diag(m);
  std::vector<double> upper(m, 0.0);
  std::vector<double> x(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i > 0 ? W[i - 1] / (h[i - 1] * h[i - 1]) : 0.0;
    const double right = W[i] / (h[i] * h[i]);
    diag[i] = left + right + w[i];
    if (i + 1 < m) upper[i] = -right;
  }
  // Thomas algorithm; the matrix is symmetric so lower == upper.
  for (std::size_t i = 1; i < m; ++i) {
    const double f = upper[i - 1] / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    x[i] -= f * x[i - 1];
  }
  x[m - 1] /= diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = (x[i] - upper[i] * x[i + 1]) / diag[i];
  x.push_back(0.0);
  return x;
}

SolveReport minimize_ground_state(const SolveConfig& cfg) {
  if (!cfg.grid) throw std::invalid_argument("solve: grid is missing");
  const auto& grid = *cfg.grid;
  const double p = cfg.p;
  const auto& V = cfg.potential;
  require_admissible_exponent(p, grid.dimension());
  if (!(cfg.tol_weak > 0.0 && cfg.tol_J > 0.0 && cfg.tol_tangent > 0.0 && cfg.step0 > 0.0)) {
    throw std::invalid_argument("solve: tolerances and step0 must be positive");
  }

  FiberOptions fiber_opts;
  fiber_opts.scan_points = 0;
  fiber_opts.assume_concave = cfg.assume_concave;
  const auto sampled = kernels::sample_potential(grid, V);
  const auto basis = test_basis(cfg.grid);

  SolveReport report(Field::zeros(cfg.grid));
  if (!cfg.assume_concave) report.warnings.push_back("(V3) not certified: fiber maxima come from global scans");

  InitSpec init = cfg.init;
  Field u = pin_boundary(initial_field(cfg.grid, init));
  auto start = [&](const Field& u0) {
    const auto proj = project_to_M_detailed(u0, V, p, fiber_opts);
    for (const auto& w : proj.warnings) report.warnings.push_back(w);
    const double ell = decay_length(u0);
    if (proj.t_star * ell > grid.r_max() / 4.0) {
      std::ostringstream msg;
      msg << "initial fiber maximizer t = " << proj.t_star << " exceeds r_max / (4 * decay length); truncation may bias m";
      report.warnings.push_back(msg.str());
    }
    report.t_star_history.push_back(proj.t_star);
    return proj.u;
  };
  u = start(u);
  const double initial_size = x_norms(u).d_X_to_zero;

  std::vector<double> gI(grid.size());
  std::vector<double> gJ(grid.size());
  double sigma = cfg.step0;
  int stalled = 0;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const auto m = kernels::moments(grid, u.values(), sampled, p);
    const double I = energy_from_moments(m, p).total;
    const double J = constraint_J_from_moments(m, p, grid.dimension());
    kernels::energy_gradient(grid, u.values(), sampled, p, gI);
    kernels::constraint_gradient(grid, u.values(), sampled, p, gJ);
    const auto g = precondition(grid, gI);
    const auto k = precondition(grid, gJ);
    const double gJk = kernels::dot(gJ, k);
    const double lambda = gJk > 0.0 ? kernels::dot(gJ, g) / gJk : 0.0;
    std::vector<double> gT(grid.size());
    std::vector<double> lagrange(grid.size());
    for (std::size_t i = 0; i < gT.size(); ++i) {
      gT[i] = g[i] - lambda * k[i];
      lagrange[i] = gI[i] - lambda * gJ[i];
    }
    const double slope = kernels::dot(lagrange, gT);
    const double u_norm = h1_norm(u);
    const double tangent = std::sqrt(std::max(0.0, slope)) / u_norm;
    const double weak = weak_residual_from_gradient(u, gI, basis) / u_norm;

    report.energy_history.push_back(I);
    report.J_history.push_back(J);
    report.tangent_residual_history.push_back(tangent);
    report.weak_residual_history.push_back(weak);
    report.multiplier = lambda;
    report.tangent_residual = tangent;
    report.weak_residual = weak;

    if (tangent <= cfg.tol_tangent && std::abs(J) <= cfg.tol_J && weak <= cfg.tol_weak) {
      report.converged = true;
      break;
    }

    bool accepted = false;
    sigma = std::min(cfg.step0, 2.0 * sigma);
    for (int ls = 0; ls < 60 && !accepted; ++ls, sigma *= 0.5) {
      std::vector<double> trial(u.values().begin(), u.values().end());
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= sigma * gT[i];
      Field step(cfg.grid, std::move(trial));
      if (x_norms(step).d_X_to_zero < 1e-8 * initial_size) continue;
      std::optional<Projection> proj;
      try {
        proj = project_to_M_detailed(step, V, p, fiber_opts);
      } catch (const std::exception&) {
        continue;
      }
      const double I_trial = energy(proj->u, V, p).total;
      if (I_trial <= I - cfg.armijo * sigma * slope) {
        stalled = I_trial < I ? 0 : stalled + 1;
        u = std::move(proj->u);
        report.t_star_history.push_back(proj->t_used);
        accepted = true;
        sigma *= 2.0;  // undo the halving the loop is about to apply
      }
    }
    if (stalled >= 20) {
      report.warnings.push_back("energy stopped decreasing at rounding level; stopping");
      ++it;
      break;
    }
    if (!accepted) {
      if (x_norms(u).d_X_to_zero < 1e-8 * initial_size && report.restarts < cfg.max_restarts) {
        ++report.restarts;
        init.width *= 2.0;
        init.radius *= 2.0;
        report.warnings.push_back("iterate collapsed toward 0; restarted with a wider initial field");
        u = start(pin_boundary(initial_field(cfg.grid, init)));
        sigma = cfg.step0;
        continue;
      }
      report.warnings.push_back("line search failed to decrease I; stopping");
      break;
    }
  }
  report.iterations = it;

  const bool nonnegative = std::all_of(u.values().begin(), u.values().end(), [](double v) { return v >= 0.0; });
  report.positivity = nonnegative;
  if (!nonnegative) {
    report.warnings.push_back("minimizer changed sign; replaced by |u|");
    u = project_to_M_detailed(positivity_project(u), V, p, fiber_opts).u;
  }

  report.u_star = u;
  report.energy = energy(u, V, p);
  report.m = report.energy.total;
  report.pohozaev = {pohozaev_residual(u, V, p, -1.0), pohozaev_residual(u, V, p, 0.0),
                     pohozaev_residual(u, V, p, 1.0)};
  if (report.converged && !(report.m > 0.0)) report.warnings.push_back("converged with m <= 0");
  return report;
}

namespace {

// 1 on |x| <= 1/2, 0 on |x| >= 1, quintic smoothstep in between.
double eta(double x) {
  const double a = std::abs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double s = 2.0 * (1.0 - a);  // 0 at a = 1, 1 at a = 1/2
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

}  // namespace

std::optional<Improvement> deform_improve(const Field& u, const Field& phi, const PotentialModel& V, double p,
                                          double eps, const DeformOptions& options) {
  require_same_grid(u, phi);
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("deform_improve: eps must lie in (0, 1)");
  const auto& grid = u.grid();
  const auto sampled = kernels::sample_potential(grid, V);
  const auto m = kernels::moments(grid, u.values(), sampled, p);
  const double size = m.dirichlet + std::abs(m.potential) + m.quasilinear + m.nonlinear;
  const double J = constraint_J_from_moments(m, p, grid.dimension());
  if (!(size > 0.0) || std::abs(J) > options.tol_J_relative * size) {
    throw std::invalid_argument("deform_improve: u is not on the Pohozaev manifold");
  }
  if (!(gateaux(u, phi, V, p) < 0.0)) throw std::invalid_argument("deform_improve: phi is not a descent direction");
  const double I0 = energy_from_moments(m, p).total;
  const MonotoneCubic interp(grid.nodes(), u.values(), 0.0, 0.0);

  for (int k = 0; k <= options.max_halvings; ++k, eps *= 0.5) {
    auto gamma = [&](double t) {
      std::vector<double> g(u.size());
      const double c = eps * eta((t - 1.0) / eps);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = t * interp(grid.node(i) / t) + c * phi[i];
      return Field(u.grid_ptr(), std::move(g));
    };
    auto J_of = [&](double t) {
      const Field g = gamma(t);
      return constraint_J_from_moments(kernels::moments(grid, g.values(), sampled, p), p, grid.dimension());
    };
    double lo = 1.0 - eps;
    double hi = 1.0 + eps;
    double J_lo = J_of(lo);
    double J_hi = J_of(hi);
    if (!(J_lo > 0.0 && J_hi < 0.0)) continue;
    // Illinois regula falsi on the sign change of J along gamma.
    double t0 = 0.5 * (lo + hi);
    int side = 0;
    for (int it = 0; it < 100; ++it) {
      t0 = (lo * J_hi - hi * J_lo) / (J_hi - J_lo);
      const double Jm = J_of(t0);
      if (std::abs(Jm) <= 1e-13 * size || hi - lo <= 1e-15) break;
      if (Jm > 0.0) {
        lo = t0;
        J_lo = Jm;
        if (side == 1) J_hi *= 0.5;
        side = 1;
      } else {
        hi = t0;
        J_hi = Jm;
        if (side == -1) J_lo *= 0.5;
        side = -1;
      }
    }
    Field candidate = gamma(t0);
    const double I1 = energy_from_moments(kernels::moments(grid, candidate.values(), sampled, p), p).total;
    if (I1 < I0 - options.min_relative_decrease * std::abs(I0)) {
      return Improvement{std::move(candidate), I1, eps, t0};
    }
  }
  return std::nullopt;
}

Field positivity_project(const Field& u) {
  std::vector<double> a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::abs(u[i]);
  return Field(u.grid_ptr(), std::move(a));
}

}  // namespace qnls
