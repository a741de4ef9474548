#include "qnls/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qnls {

double critical_exponent(int dimension) {
  if (dimension < 3) throw std::invalid_argument("dimension N must be >= 3");
  return (3.0 * dimension + 2.0) / (dimension - 2.0);
}

void require_admissible_exponent(double p, int dimension) {
  const double pc = critical_exponent(dimension);
  if (!(p > 1.0 && p < pc)) {
    std::ostringstream msg;
    msg << "exponent p = " << p << " is outside the admissible range (1, (3N+2)/(N-2)) = (1, " << pc
        << ") for N = " << dimension;
    throw std::invalid_argument(msg.str());
  }
}

PotentialModel::PotentialModel(std::string kind, Profile value, std::optional<Profile> derivative,
                               std::optional<Profile> second_derivative, double V0, double V_inf,
                               std::map<std::string, double> parameters, bool constant)
    : kind_(std::move(kind)),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      second_(std::move(second_derivative)),
      V0_(V0),
      V_inf_(V_inf),
      parameters_(std::move(parameters)),
      constant_(constant) {
  if (!value_) throw std::invalid_argument("potential: empty profile");
}

double PotentialModel::derivative(double r) const {
  if (derivative_) return (*derivative_)(r);
  const double h = 1e-5 * (1.0 + std::abs(r));
  return (value_(r + h) - value_(std::abs(r - h))) / (2.0 * h);
}

double PotentialModel::second_derivative(double r) const {
  if (second_) return (*second_)(r);
  const double h = 1e-5 * (1.0 + std::abs(r));
  return (value_(r + h) - 2.0 * value_(r) + value_(std::abs(r - h))) / (h * h);
}

PotentialModel PotentialModel::shifted(double omega) const {
  auto params = parameters_;
  params["shift"] = params.count("shift") ? params["shift"] + omega : omega;
  auto base = value_;
  return PotentialModel(kind_, [base, omega](double r) { return base(r) + omega; }, derivative_, second_,
                        V0_ + omega, V_inf_ + omega, std::move(params), constant_);
}

namespace potentials {

PotentialModel constant(double omega) {
  return PotentialModel(
      "constant", [omega](double) { return omega; }, [](double) { return 0.0; }, [](double) { return 0.0; },
      omega, omega, {{"omega", omega}}, true);
}

PotentialModel shifted_lorentz(double omega, double a, double k) {
  auto value = [=](double r) { return omega - a * std::pow(1.0 + r * r, -k); };
  auto d1 = [=](double r) { return 2.0 * a * k * r * std::pow(1.0 + r * r, -k - 1.0); };
  auto d2 = [=](double r) {
    const double q = 1.0 + r * r;
    return 2.0 * a * k * std::pow(q, -k - 2.0) * (q - 2.0 * (k + 1.0) * r * r);
  };
  const double V0 = a >= 0.0 ? omega - a : omega;
  return PotentialModel("shifted_lorentz", value, d1, d2, V0, omega, {{"omega", omega}, {"a", a}, {"k", k}});
}

PotentialModel shifted_gaussian(double omega, double a) {
  auto value = [=](double r) { return omega + a * std::exp(-r * r); };
  auto d1 = [=](double r) { return -2.0 * a * r * std::exp(-r * r); };
  auto d2 = [=](double r) { return a * (4.0 * r * r - 2.0) * std::exp(-r * r); };
  return PotentialModel("shifted_gaussian", value, d1, d2, omega + std::min(a, 0.0), omega,
                        {{"omega", omega}, {"a", a}});
}

PotentialModel oscillatory(double omega, double a, double k) {
  auto value = [=](double r) { return omega + a * std::sin(k * r); };
  auto d1 = [=](double r) { return a * k * std::cos(k * r); };
  auto d2 = [=](double r) { return -a * k * k * std::sin(k * r); };
  return PotentialModel("oscillatory", value, d1, d2, omega - std::abs(a), omega,
                        {{"omega", omega}, {"a", a}, {"k", k}});
}

PotentialModel from_name(const std::string& kind, const std::map<std::string, double>& parameters) {
  auto get = [&](const char* key, double fallback) {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  };
  if (kind == "constant") return constant(get("omega", 1.0));
  if (kind == "shifted_lorentz") return shifted_lorentz(get("omega", 2.0), get("a", 1.0), get("k", 1.0));
  if (kind == "shifted_gaussian") return shifted_gaussian(get("omega", 2.0), get("a", -0.5));
  if (kind == "oscillatory") return oscillatory(get("omega", 2.0), get("a", 1.0), get("k", 1.0));
  throw std::invalid_argument("unknown potential kind '" + kind +
                              "' (expected constant, shifted_lorentz, shifted_gaussian, oscillatory)");
}

}  // namespace potentials

ConcavityExponents concavity_exponents(double p, int dimension) {
  const double denom = dimension + p + 1.0;
  return {(dimension + 2.0) / denom, 1.0 / denom};
}

double concavity_bracket(const PotentialModel& V, double y, const ConcavityExponents& e) {
  const double a = e.alpha;
  const double b = e.beta;
  return (a - 1.0) * a * V(y) + b * (2.0 * a - 1.0 + b) * y * V.derivative(y) +
         b * b * y * y * V.second_derivative(y);
}

double concavity_profile(const PotentialModel& V, double r, double s, const ConcavityExponents& e) {
  return std::pow(s, e.alpha) * V(std::pow(s, e.beta) * r);
}

double concavity_second_derivative(const PotentialModel& V, double r, double s, const ConcavityExponents& e) {
  return std::pow(s, e.alpha - 2.0) * concavity_bracket(V, std::pow(s, e.beta) * r, e);
}

namespace {

std::vector<double> core_radii(const HypothesisOptions& o) {
  const std::size_t m = std::max<std::size_t>(o.r_samples, 2);
  std::vector<double> r(m);
  for (std::size_t j = 0; j < m; ++j) r[j] = o.r_max * static_cast<double>(j) / static_cast<double>(m - 1);
  return r;
}

std::vector<double> tail_radii(const HypothesisOptions& o) {
  std::vector<double> r(o.tail_points);
  for (std::size_t k = 0; k < o.tail_points; ++k) r[k] = o.r_max * std::pow(10.0, 0.25 * static_cast<double>(k + 1));
  return r;
}

std::vector<double> s_ladder(const HypothesisOptions& o) {
  if (!(o.s_min > 0.0 && o.s_min < o.s_max)) throw std::invalid_argument("hypotheses: need 0 < s_min < s_max");
  const std::size_t m = std::max<std::size_t>(o.s_points, 2);
  std::vector<double> s(m);
  const double ratio = std::log(o.s_max / o.s_min);
  for (std::size_t k = 0; k < m; ++k) s[k] = o.s_min * std::exp(ratio * static_cast<double>(k) / static_cast<double>(m - 1));
  return s;
}

double bracket_scale(const PotentialModel& V, double y, const ConcavityExponents& e) {
  const double a = e.alpha;
  const double b = e.beta;
  return std::abs((a - 1.0) * a * V(y)) + std::abs(b * (2.0 * a - 1.0 + b) * y * V.derivative(y)) +
         std::abs(b * b * y * y * V.second_derivative(y));
}

}  // namespace

std::vector<double> concavity_sample_radii(double p, int dimension, const HypothesisOptions& options) {
  const auto e = concavity_exponents(p, dimension);
  std::vector<double> y;
  for (double r : core_radii(options)) {
    for (double s : s_ladder(options)) y.push_back(std::pow(s, e.beta) * r);
  }
  return y;
}

HypothesisReport check_hypotheses(const PotentialModel& V, double p, int dimension,
                                  const HypothesisOptions& options) {
  require_admissible_exponent(p, dimension);
  const auto e = concavity_exponents(p, dimension);
  const auto radii = core_radii(options);
  const auto tail = tail_radii(options);
  const auto ladder = s_ladder(options);
  const double tol = options.tolerance;

  HypothesisReport report;
  report.r_checked_max = options.r_max;
  report.tail_checked_max = tail.empty() ? options.r_max : tail.back();
  report.s_checked = {ladder.front(), ladder.back()};

  // (V1): 0 < V0 <= V(r) <= V_inf, and V(r) -> V_inf along the tail.
  const double value_scale = std::max(1.0, std::abs(V.V_inf()));
  report.v1_ok = V.V0() > 0.0 && V.V0() <= V.V_inf();
  if (!report.v1_ok) report.witnesses.push_back({"V1", 0.0, 0.0, V.V0()});
  auto check_bounds = [&](double r) {
    const double v = V(r);
    if (!std::isfinite(v) || v < V.V0() - tol * value_scale || v > V.V_inf() + tol * value_scale) {
      report.v1_ok = false;
      report.witnesses.push_back({"V1", r, 0.0, v});
    }
  };
  for (double r : radii) check_bounds(r);
  for (double r : tail) check_bounds(r);
  const double tail_tol = 1e-3 * value_scale;
  for (std::size_t k = tail.size() / 2; k < tail.size(); ++k) {
    const double v = V(tail[k]);
    if (std::abs(v - V.V_inf()) > tail_tol) {
      report.v1_ok = false;
      report.witnesses.push_back({"V1", tail[k], 0.0, v});
    }
  }

  // (V2): sup |r V'| finite, and the outer tail does not exceed what was seen inside it.
  double inner_sup = 0.0;
  bool finite = true;
  for (double r : radii) {
    const double m = std::abs(V.radial_moment(r));
    finite = finite && std::isfinite(m);
    inner_sup = std::max(inner_sup, m);
  }
  const std::size_t half = tail.size() / 2;
  for (std::size_t k = 0; k < half; ++k) inner_sup = std::max(inner_sup, std::abs(V.radial_moment(tail[k])));
  double outer_sup = 0.0;
  double outer_arg = 0.0;
  for (std::size_t k = half; k < tail.size(); ++k) {
    const double m = std::abs(V.radial_moment(tail[k]));
    finite = finite && std::isfinite(m);
    if (m > outer_sup) {
      outer_sup = m;
      outer_arg = tail[k];
    }
  }
  report.v2_bound = std::max(inner_sup, outer_sup);
  report.v2_ok = finite && outer_sup <= inner_sup * (1.0 + 1e-6) + tol;
  if (!report.v2_ok) report.witnesses.push_back({"V2", outer_arg, 0.0, outer_sup});

  // (V3): sign of h_r''(s) over radii x s-ladder, cross-checked by centered differences.
  const std::size_t nr = radii.size();
  const std::size_t ns = ladder.size();
  std::vector<double> bracket_max(nr, -std::numeric_limits<double>::infinity());
  std::vector<double> discrepancy(nr, 0.0);
  std::vector<std::vector<HypothesisWitness>> failures(nr);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < nr; ++j) {
    const double r = radii[j];
    for (std::size_t k = 0; k < ns; ++k) {
      const double s = ladder[k];
      const double y = std::pow(s, e.beta) * r;
      const double b = concavity_bracket(V, y, e);
      const double scale = bracket_scale(V, y, e);
      bracket_max[j] = std::max(bracket_max[j], b);
      if (b > tol * std::max(scale, 1e-300)) failures[j].push_back({"V3", r, s, b});

      const double ds = 1e-3 * s;
      const double fd = (concavity_profile(V, r, s + ds, e) - 2.0 * concavity_profile(V, r, s, e) +
                         concavity_profile(V, r, s - ds, e)) /
                        (ds * ds);
      const double exact = std::pow(s, e.alpha - 2.0) * b;
      const double ref = std::pow(s, e.alpha - 2.0) * std::max(scale, 1e-300);
      discrepancy[j] = std::max(discrepancy[j], std::abs(fd - exact) / ref);
    }
  }
  report.v3_ok = true;
  report.v3_min_second_derivative = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nr; ++j) {
    report.v3_min_second_derivative = std::max(report.v3_min_second_derivative, bracket_max[j]);
    report.fd_max_discrepancy = std::max(report.fd_max_discrepancy, discrepancy[j]);
    if (!failures[j].empty()) report.v3_ok = false;
    report.witnesses.insert(report.witnesses.end(), failures[j].begin(), failures[j].end());
  }
  return report;
}

double omega0(const PotentialModel& W, double p, int dimension, const HypothesisOptions& options) {
  require_admissible_exponent(p, dimension);
  const auto e = concavity_exponents(p, dimension);
  const double curvature = e.alpha * (1.0 - e.alpha);
  if (!(curvature > 0.0)) throw std::logic_error("omega0: alpha (1 - alpha) must be positive");
  const auto y = concavity_sample_radii(p, dimension, options);
  double best = -std::numeric_limits<double>::infinity();
  for (double yk : y) {
    const double drift = e.beta * (2.0 * e.alpha - 1.0 + e.beta) * yk * W.derivative(yk) +
                         e.beta * e.beta * yk * yk * W.second_derivative(yk);
    best = std::max(best, drift / curvature - W(yk));
  }
  return best;
}

}  // namespace qnls
