#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qnls {

/// (3N + 2) / (N - 2): the exponent above which no ground state exists.
double critical_exponent(int dimension);

/// Throws std::invalid_argument naming the bound unless 1 < p < (3N+2)/(N-2).
void require_admissible_exponent(double p, int dimension);

/// Radial potential V(|x|) with first and second radial derivatives.
///
/// Derivatives are analytic closures for the built-ins. A model constructed
/// without them falls back to centered differences with step 1e-5 (1 + r).
/// V0 and V_inf are claims carried along for the hypothesis checks; nothing
/// here assumes they are true.
class PotentialModel {
 public:
  using Profile = std::function<double(double)>;

  PotentialModel(std::string kind, Profile value, std::optional<Profile> derivative,
                 std::optional<Profile> second_derivative, double V0, double V_inf,
                 std::map<std::string, double> parameters = {}, bool constant = false);

  double operator()(double r) const { return value_(r); }
  double derivative(double r) const;
  double second_derivative(double r) const;
  /// x . grad V(x) = r V'(r).
  double radial_moment(double r) const { return r * derivative(r); }

  double V0() const noexcept { return V0_; }
  double V_inf() const noexcept { return V_inf_; }
  const std::string& kind() const noexcept { return kind_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }
  bool is_constant() const noexcept { return constant_; }
  bool has_analytic_derivatives() const noexcept { return derivative_.has_value() && second_.has_value(); }

  /// W + omega, keeping analytic derivatives; V0 and V_inf shift with omega.
  PotentialModel shifted(double omega) const;

 private:
  std::string kind_;
  Profile value_;
  std::optional<Profile> derivative_;
  std::optional<Profile> second_;
  double V0_;
  double V_inf_;
  std::map<std::string, double> parameters_;
  bool constant_;
};

namespace potentials {

PotentialModel constant(double omega);
/// omega - a / (1 + r^2)^k. For a >= 0: V0 = omega - a, V_inf = omega.
PotentialModel shifted_lorentz(double omega, double a, double k = 1.0);
/// omega + a e^{-r^2}. Claims V0 = omega + min(a, 0), V_inf = omega.
PotentialModel shifted_gaussian(double omega, double a);
/// omega + a sin(k r); claims V0 = omega - |a| and V_inf = omega, which (V1) refutes.
PotentialModel oscillatory(double omega, double a, double k = 1.0);

/// Builds a built-in by name: constant, shifted_lorentz, shifted_gaussian, oscillatory.
PotentialModel from_name(const std::string& kind, const std::map<std::string, double>& parameters);

}  // namespace potentials

struct HypothesisOptions {
  double r_max = 20.0;
  std::size_t r_samples = 64;
  double s_min = 1e-3;
  double s_max = 1e3;
  std::size_t s_points = 64;
  /// Tail radii r_max * 10^{k/4}, k = 1..tail_points.
  std::size_t tail_points = 16;
  double tolerance = 1e-9;
};

struct HypothesisWitness {
  std::string hypothesis;  ///< "V1", "V2" or "V3"
  double r = 0.0;
  double s = 0.0;          ///< 0 when the check does not involve s
  double value = 0.0;
};

struct HypothesisReport {
  bool v1_ok = false;
  bool v2_ok = false;
  bool v3_ok = false;
  double v2_bound = 0.0;                 ///< sup |r V'(r)| over all sampled radii
  double v3_min_second_derivative = 0.0; ///< max over samples of the bracket in h_r''(s); <= 0 under (V3)
  double fd_max_discrepancy = 0.0;       ///< chain rule vs centered differences of h_r, relative
  double r_checked_max = 0.0;
  double tail_checked_max = 0.0;
  std::pair<double, double> s_checked{0.0, 0.0};
  std::vector<HypothesisWitness> witnesses;

  bool all_ok() const noexcept { return v1_ok && v2_ok && v3_ok; }
};

/// Concavity exponents of h_r(s) = s^alpha V(s^beta r): alpha = (N+2)/(N+p+1), beta = 1/(N+p+1).
struct ConcavityExponents {
  double alpha;
  double beta;
};
ConcavityExponents concavity_exponents(double p, int dimension);

/// Bracket B(y) with h_r''(s) = s^{alpha-2} B(s^beta r):
/// B(y) = (alpha-1) alpha V(y) + beta (2 alpha - 1 + beta) y V'(y) + beta^2 y^2 V''(y).
double concavity_bracket(const PotentialModel& V, double y, const ConcavityExponents& e);

/// h_r(s) and its chain-rule second derivative.
double concavity_profile(const PotentialModel& V, double r, double s, const ConcavityExponents& e);
double concavity_second_derivative(const PotentialModel& V, double r, double s, const ConcavityExponents& e);

/// The radii y = s^beta r visited by the (V3) scan, including r = 0.
std::vector<double> concavity_sample_radii(double p, int dimension, const HypothesisOptions& options);

HypothesisReport check_hypotheses(const PotentialModel& V, double p, int dimension,
                                  const HypothesisOptions& options = {});

/// Smallest omega for which W + omega passes the sampled (V3) scan:
/// sup_y [ (beta (2 alpha - 1 + beta) y W' + beta^2 y^2 W'') / (alpha (1 - alpha)) - W ].
double omega0(const PotentialModel& W, double p, int dimension, const HypothesisOptions& options = {});

}  // namespace qnls
