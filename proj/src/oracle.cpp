#include "qnls/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "qnls/functional.hpp"

namespace qnls {

std::string to_string(ShotOutcome outcome) {
  switch (outcome) {
    case ShotOutcome::undershoot:
      return "undershoot";
    case ShotOutcome::overshoot:
      return "overshoot";
    case ShotOutcome::converged:
      return "converged";
  }
  return "unknown";
}

namespace {

struct Rhs {
  double V;
  double p;
  double N;

  // (u', v') with v = u'. At r = 0 the symmetric limit (N-1) v / r -> (N-1) u'' gives u'' = F / N.
  std::pair<double, double> operator()(double r, double u, double v) const {
    const double F = (V * u - std::pow(std::abs(u), p - 1.0) * u - u * v * v) / (1.0 + u * u);
    if (r == 0.0) return {v, F / N};
    return {v, F - (N - 1.0) * v / r};
  }
};

}  // namespace

ShootResult shoot(double s0, double V, double p, int dimension, double r_max, double dr) {
  if (!(V > 0.0)) throw std::invalid_argument("shoot: V must be positive");
  require_admissible_exponent(p, dimension);
  const double rest = std::pow(V, 1.0 / (p - 1.0));
  if (!(s0 > rest)) throw std::invalid_argument("shoot: s0 must exceed the rest point V^{1/(p-1)}");
  if (!(dr > 0.0) || !(r_max > 16.0 * dr)) throw std::invalid_argument("shoot: need 0 < 16 dr < r_max");

  const Rhs f{V, p, static_cast<double>(dimension)};
  const std::size_t steps = static_cast<std::size_t>(std::llround(r_max / dr));
  const double h = r_max / static_cast<double>(steps);
  std::vector<double> rs{0.0};
  std::vector<double> us{s0};
  std::vector<double> vs{0.0};
  // A shot still positive at r_max has not crossed 0 and counts as an overshoot.
  ShotOutcome outcome = ShotOutcome::overshoot;
  bool decided = false;
  double u = s0;
  double v = 0.0;
  for (std::size_t k = 0; k < steps && !decided; ++k) {
    const double r = static_cast<double>(k) * h;
    const auto [a1, b1] = f(r, u, v);
    const auto [a2, b2] = f(r + 0.5 * h, u + 0.5 * h * a1, v + 0.5 * h * b1);
    const auto [a3, b3] = f(r + 0.5 * h, u + 0.5 * h * a2, v + 0.5 * h * b2);
    const auto [a4, b4] = f(r + h, u + h * a3, v + h * b3);
    u += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    v += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    if (!std::isfinite(u) || !std::isfinite(v)) throw std::runtime_error("shoot: integration overflow");
    rs.push_back(static_cast<double>(k + 1) * h);
    us.push_back(u);
    vs.push_back(v);
    if (u <= 0.0) {
      outcome = ShotOutcome::undershoot;
      decided = true;
    } else if (v > 0.0) {
      outcome = ShotOutcome::overshoot;
      decided = true;
    } else if (u < 1e-8 * s0) {
      outcome = ShotOutcome::converged;
      decided = true;
    }
  }

  auto grid = build_grid(dimension, r_max, steps + 1);
  std::vector<double> values(steps + 1, 0.0);
  for (std::size_t i = 0; i < us.size(); ++i) values[i] = std::max(us[i], 0.0);
  ShootResult out{.s0 = s0,
                  .classification = outcome,
                  .r_exit = rs.back(),
                  .r = std::move(rs),
                  .u = std::move(us),
                  .du = std::move(vs),
                  .profile = Field(grid, std::move(values))};
  return out;
}

namespace {

// Very tall shots can blow up in RK4 near their first zero; those stay unclassified.
std::optional<ShotOutcome> classify(double s0, double V, double p, int N, const OracleOptions& o) {
  try {
    return shoot(s0, V, p, N, o.r_max, o.dr).classification;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

struct Candidate {
  double s0;
  double r_exit;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
};

// Bisects s0 on a bracket down to adjacent doubles and keeps the stretch where the
// two bracketing shots still agree.
Candidate bisect_bracket(double lo, double hi, ShotOutcome lo_kind, double V, double p, int N,
                         const OracleOptions& o) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto kind = classify(mid, V, p, N, o);
    if (!kind) break;
    if (kind == ShotOutcome::converged) {
      lo = hi = mid;
      break;
    }
    (kind == lo_kind ? lo : hi) = mid;
  }
  const auto a = shoot(lo, V, p, N, o.r_max, o.dr);
  const auto b = shoot(hi, V, p, N, o.r_max, o.dr);
  const std::size_t common = std::min(a.u.size(), b.u.size());
  std::size_t keep = common;
  for (std::size_t i = 0; i < common; ++i) {
    const double scale = std::max(std::abs(a.u[i]), std::abs(b.u[i]));
    if (std::abs(a.u[i] - b.u[i]) > 1e-3 * scale || a.u[i] <= 0.0 || b.u[i] <= 0.0 || a.du[i] > 0.0 ||
        b.du[i] > 0.0) {
      keep = i;
      break;
    }
  }
  keep = std::max<std::size_t>(keep, 2);
  Candidate c{0.5 * (lo + hi), a.r[keep - 1], {}, {}, {}};
  for (std::size_t i = 0; i < keep; ++i) {
    c.r.push_back(a.r[i]);
    c.u.push_back(0.5 * (a.u[i] + b.u[i]));
    c.du.push_back(0.5 * (a.du[i] + b.du[i]));
  }
  return c;
}

Field transfer(const Candidate& c, double V, const GridPtr& target) {
  const double N = target->dimension();
  const double kappa = std::sqrt(V);
  const double re = c.r.back();
  const double ue = c.u.back();
  const double h = c.r[1] - c.r[0];
  return Field::sample(target, [&](double x) {
    if (x >= re) return ue * std::pow(re / x, 0.5 * (N - 1.0)) * std::exp(-kappa * (x - re));
    std::size_t k = std::min(static_cast<std::size_t>(x / h), c.r.size() - 2);
    const double t = (x - c.r[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * c.u[k] + (t3 - 2 * t2 + t) * h * c.du[k] + (-2 * t3 + 3 * t2) * c.u[k + 1] +
           (t3 - t2) * h * c.du[k + 1];
  });
}

}  // namespace

OracleProfile find_ground_profile(double V, double p, const GridPtr& target, const OracleOptions& options) {
  if (!(V > 0.0)) throw std::invalid_argument("find_ground_profile: V must be positive");
  const int N = target->dimension();
  require_admissible_exponent(p, N);
  if (options.scan_points < 2) throw std::invalid_argument("find_ground_profile: need at least 2 scan points");
  const double rest = std::pow(V, 1.0 / (p - 1.0));

  std::vector<double> ladder(options.scan_points);
  std::vector<std::optional<ShotOutcome>> kinds(options.scan_points);
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(ladder.size() - 1);
    ladder[k] = k == 0 ? rest * (1.0 + 1e-6) : rest * std::pow(1e3, frac);
    kinds[k] = classify(ladder[k], V, p, N, options);
  }

  const auto potential = potentials::constant(V);
  std::vector<OracleCandidate> found;
  std::optional<OracleProfile> best;
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    if (!kinds[k] || !kinds[k + 1] || *kinds[k] == *kinds[k + 1]) continue;
    const auto c = bisect_bracket(ladder[k], ladder[k + 1], *kinds[k], V, p, N, options);
    if (!(c.u.back() <= 1e-6 * c.s0) || c.r_exit >= options.r_max) continue;
    Field profile = transfer(c, V, target);
    const double I = energy(profile, potential, p).total;
    found.push_back({c.s0, c.r_exit, I});
    if (!best || I < best->energy) best = OracleProfile{profile, I, c.s0, c.r_exit, {}};
  }
  if (!best) throw std::runtime_error("find_ground_profile: no decaying shot between overshoot/undershoot brackets in (V^{1/(p-1)}, 1e3 V^{1/(p-1)})");
  best->candidates = std::move(found);
  return *std::move(best);
}

}  // namespace qnls
