// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../support.hpp"
#include "qnls/diagnostics.hpp"
#include "qnls/oracle.hpp"
#include "qnls/solver.hpp"

using namespace qnls;
using namespace qnls::testing;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  std::string label;
  PotentialModel V;
  double p;
  double V0;
  double V_inf;
  SolveReport r;
  double seconds;
};

Run solve(const std::string& label, const PotentialModel& V, double p, double V0, double V_inf, std::size_t n = 801,
          double r_max = 20.0) {
  SolveConfig c;
  c.p = p;
  c.potential = V;
  c.grid = build_grid(3, r_max, n);
  const auto t0 = std::chrono::steady_clock::now();
  auto r = minimize_ground_state(c);
  return {label, V, p, V0, V_inf, std::move(r), seconds_since(t0)};
}

double sup_gap(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

// Argmax of f on a log grid, then once more on a finer log grid around it.
double dense_argmax(const Fiber& f, double t_min, double t_max) {
  auto scan = [&](double lo, double hi, int points) {
    double best_t = lo;
    double best_f = -INFINITY;
    for (int k = 0; k < points; ++k) {
      const double t = lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
      const double v = f.value(t);
      if (v > best_f) {
        best_f = v;
        best_t = t;
      }
    }
    return best_t;
  };
  const double coarse = scan(t_min, t_max, 4001);
  const double step = std::pow(t_max / t_min, 1.0 / 4000.0);
  return scan(coarse / (step * step), coarse * step * step, 4001);
}

}  // namespace

int main() {
  const auto V1 = potentials::constant(1.0);
  const auto V2 = potentials::constant(2.0);
  const auto VL = potentials::shifted_lorentz(2.0, 1.0, 1.0);
  const auto VG = potentials::shifted_gaussian(2.0, -0.5);

  std::vector<Run> runs;
  runs.push_back(solve("V=1 p=2", V1, 2.0, 1.0, 1.0));
  runs.push_back(solve("V=1 p=3", V1, 3.0, 1.0, 1.0));
  runs.push_back(solve("V=2 p=2", V2, 2.0, 2.0, 2.0));
  runs.push_back(solve("V=2-1/(1+r^2) p=2", VL, 2.0, 1.0, 2.0));
  const Run& base = runs[0];

  {
    bool pass = true;
    std::string detail;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& run = runs[k];
      const auto t0 = std::chrono::steady_clock::now();
      const auto o = find_ground_profile(1.0, run.p, run.r.u_star.grid_ptr());
      const double seconds = run.seconds + seconds_since(t0);
      const double de = std::abs(run.r.m - o.energy) / o.energy;
      const double du = sup_gap(run.r.u_star, o.profile) / run.r.u_star[0];
      pass = pass && run.r.converged && de <= 1e-2 && du <= 1e-2 && seconds <= 60.0;
      detail += fmt("p=%g", run.p) + fmt(" dE=%.2e dsup/u0=%.2e", de, du) + fmt(" %.1fs; ", seconds);
    }
    report(1, "oracle equivalence", pass, detail);
  }

  {
    bool pass = true;
    double worst = 0.0;
    double worst_affine = 0.0;
    for (const auto& run : runs) {
      pass = pass && run.r.converged;
      const double D = run.r.energy.dirichlet;
      const auto rm = pohozaev_residual(run.r.u_star, run.V, run.p, -1.0);
      const auto r0 = pohozaev_residual(run.r.u_star, run.V, run.p, 0.0);
      const auto r1 = pohozaev_residual(run.r.u_star, run.V, run.p, 1.0);
      for (const auto& r : {rm, r0, r1}) worst = std::max(worst, std::abs(r.value) / D);
      // Both parts vanish at a solution, so rounding is measured against the terms they are built from.
      const auto& e = run.r.energy;
      const double scale = e.dirichlet + std::abs(e.potential) + e.quasilinear + e.nonlinear;
      worst_affine = std::max(worst_affine, std::abs(r1.value - 2.0 * r0.value + rm.value) / scale);
      worst_affine = std::max(worst_affine, std::abs((r1.value - r0.value) - r0.nehari_part) / scale);
    }
    pass = pass && worst <= 1e-3 && worst_affine <= 1e-12;
    report(2, "pohozaev family", pass,
           fmt("max |R_a|/D=%.2e, affinity %.2e over ", worst, worst_affine) + std::to_string(runs.size()) + " minimizers");
  }

  {
    auto g = build_grid(3, 20.0, 801);
    std::mt19937_64 rng(2024);
    const std::vector<const PotentialModel*> Vs{&V1, &VL, &VG};
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto u = random_mixture(g, rng);
      const auto& V = *Vs[k % 3];
      const double p = 1.2 + 0.08 * k;
      const double J = constraint_J(u, V, p);
      const auto rm = pohozaev_residual(u, V, p, -1.0);
      const auto r0 = pohozaev_residual(u, V, p, 0.0);
      const double scale = std::abs(r0.base_part) + std::abs(r0.nehari_part);
      e1 = std::max(e1, std::abs(J + rm.value) / scale);
      e2 = std::max(e2, std::abs(gateaux(u, u, V, p) - r0.nehari_part) / scale);
      e3 = std::max(e3, std::abs(fiber_derivative(u, V, p, 1.0) - J) / scale);
    }
    report(3, "cross-identities", e1 <= 1e-10 && e2 <= 1e-10 && e3 <= 1e-10,
           fmt("J+R_-1 %.1e, <I'(u),u>-nehari %.1e, f'(1)-J %.1e on 100 fields", e1, e2, e3));
  }

  {
    auto g = build_grid(3, 20.0, 801);
    std::mt19937_64 rng(77);
    const std::vector<const PotentialModel*> Vs{&V1, &VL, &VG};
    const double p = 2.0;
    bool certified = true;
    for (const auto* V : Vs) certified = certified && check_hypotheses(*V, p, 3).v3_ok;
    int single = 0;
    int matched = 0;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto u = random_mixture(g, rng);
      for (const auto* V : Vs) {
        if (fiber_scan(u, *V, p, 1e-2, 1e2, 401).sign_changes() == 1) ++single;
        const double t_star = maximize_fiber(u, *V, p).t_star;
        const double t_dense = dense_argmax(Fiber(u, *V, p), 1e-2, 1e2);
        const double err = std::abs(t_star - t_dense) / t_dense;
        worst = std::max(worst, err);
        if (err <= 1e-4) ++matched;
      }
    }
    report(4, "fiber uniqueness", certified && single == 150 && matched == 150,
           fmt("(V3) certified=%g, one sign change %g/150, ", certified, single) +
               fmt("argmax within 1e-4 %g/150 (worst %.1e)", matched, worst));
  }

  {
    // m-bar(V0) is the minimum for the constant potential V0.
    std::map<double, double> mbar{{1.0, runs[0].r.m}, {2.0, runs[2].r.m}};
    bool pass = true;
    std::string detail;
    for (const auto& run : runs) {
      if (run.p != 2.0 && run.V0 != 1.0) continue;
      const double m_ref = run.p == 2.0 ? mbar.at(run.V0) : runs[1].r.m;
      const auto c = coercivity_constant(run.V0, run.V_inf, run.p, 3);
      const double bound = c.c * coercivity_norm(run.r.u_star);
      const bool ok = run.r.converged && run.r.m > 0.0 && run.r.m >= m_ref && run.r.m >= bound;
      pass = pass && ok;
      detail += run.label + fmt(" m=%.4f mbar=%.4f cN=%.3g; ", run.r.m, m_ref, bound);
    }
    report(5, "positive level and coercivity", pass, detail);
  }

  {
    const auto& run = runs[3];
    const bool certified = check_hypotheses(VL, 2.0, 3).all_ok();
    bool positive = run.r.positivity;
    for (std::size_t i = 0; i + 1 < run.r.u_star.size(); ++i) positive = positive && run.r.u_star[i] > 0.0;
    const double lo = runs[0].r.m;
    const double hi = runs[2].r.m;
    const bool bracketed = run.r.m >= lo - 1e-3 && run.r.m <= hi + 1e-3;
    report(6, "nonconstant potential", certified && run.r.converged && positive && bracketed,
           fmt("certified=%g", certified) + fmt(" m(1)=%.6f m=%.6f", lo, run.r.m) + fmt(" m(2)=%.6f", hi));
  }

  {
    auto g = build_grid(3, 20.0, 801);
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> pick(0, 2);
    const std::vector<const PotentialModel*> Vs{&V1, &VL, &VG};
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto u = random_mixture(g, rng);
      auto phi = random_mixture(g, rng);
      if (k % 2) phi *= -0.5;
      const auto& V = *Vs[pick(rng)];
      const double p = 2.0 + 0.05 * k;
      const double exact = gateaux(u, phi, V, p);
      auto fd_error = [&](double eps) {
        const double fd = (energy(u + eps * phi, V, p).total - energy(u + (-eps) * phi, V, p).total) / (2.0 * eps);
        return std::abs(fd - exact);
      };
      const double ratio = fd_error(1e-2) / fd_error(5e-3);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    report(7, "gradient correctness", lo >= 2.0 && hi <= 8.0,
           fmt("error ratio for eps 1e-2 -> 5e-3 in [%.3f, %.3f] on 20 pairs", lo, hi));
  }

  {
    auto fine = solve("n=1601", V1, 2.0, 1.0, 1.0, 1601, 20.0);
    auto wide = solve("r_max=40", V1, 2.0, 1.0, 1.0, 1601, 40.0);
    const double dn = std::abs(fine.r.m - base.r.m) / base.r.m;
    const double dr = std::abs(wide.r.m - base.r.m) / base.r.m;
    report(8, "discretization convergence", fine.r.converged && wide.r.converged && dn <= 1e-3 && dr <= 1e-3,
           fmt("m=%.9f, n doubled %.2e, r_max doubled %.2e", base.r.m, dn, dr));
  }

  {
    const auto& u = base.r.u_star;
    auto basis = test_basis(u.grid_ptr());
    basis.push_back(u);
    int tested = 0;
    int spurious = 0;
    for (const auto& phi : basis) {
      for (double sign : {1.0, -1.0}) {
        const Field dir = sign * phi;
        if (!(gateaux(u, dir, V1, 2.0) < 0.0)) continue;
        ++tested;
        if (deform_improve(u, dir, V1, 2.0, 1e-2)) ++spurious;
      }
    }
    auto g = u.grid_ptr();
    int improved = 0;
    const int points = 12;
    for (int k = 0; k < points; ++k) {
      const double w = 0.6 * std::pow(2.25 / 0.6, static_cast<double>(k) / (points - 1));
      const auto v = project_to_M(gaussian(g, w), V1, 2.0);
      const auto e = energy(v, V1, 2.0);
      Field phi(g, precondition(*g, energy_gradient(v, V1, 2.0)));
      phi *= -1.0;
      const auto res = deform_improve(v, phi, V1, 2.0, 1e-2);
      if (!res) continue;
      const double size = e.dirichlet + std::abs(e.potential) + e.quasilinear + e.nonlinear;
      if (res->I_improved < e.total && std::abs(constraint_J(res->improved, V1, 2.0)) <= 1e-8 * size) ++improved;
    }
    report(9, "deformation certificate", tested > 0 && spurious == 0 && improved >= 10,
           fmt("minimizer: %g descent directions, %g improved; ", tested, spurious) +
               fmt("gaussians on M: %g/%g improved", improved, points));
  }

  {
    const auto& u = base.r.u_star;
    bool positive = base.r.positivity;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) positive = positive && u[i] > 0.0;
    const auto fit = decay_fit(u);
    const bool rate_ok = std::abs(fit.rate - 1.0) <= 0.2;
    const std::vector<double> ts{0.5, 1.0, 2.0};
    std::vector<double> previous(ts.size(), INFINITY);
    bool monotone = true;
    std::string errs;
    for (double R : {2.0, 3.0, 4.0}) {
      const auto e = splitting_energy_error(u, R, V1, 2.0, ts);
      for (std::size_t k = 0; k < ts.size(); ++k) {
        monotone = monotone && e.errors[k] < previous[k];
        previous[k] = e.errors[k];
      }
      errs += fmt(" %.2e", e.errors[1]);
    }
    report(10, "decay and positivity", positive && rate_ok && monotone,
           fmt("positive=%g rate=%.4f, splitting error at t=1 for R=2,3,4:", positive, fit.rate) + errs);
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
