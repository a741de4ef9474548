#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnls/functional.hpp"

namespace qnls {

/// The energy along the scaling curve u_t(r) = t u(r / t).
///
/// The u-integrals D, Q, L are computed once; only int V(t r) u^2 and its
/// virial partner are re-evaluated per t, so no resampling is involved and
/// value(1) == energy(u).total, derivative(1) == constraint_J(u).
class Fiber {
 public:
  Fiber(const Field& u, const PotentialModel& V, double p);

  /// f_u(t) = t^N/2 D + t^{N+2}/2 (P(t) + Q) - t^{N+p+1}/(p+1) L.
  double value(double t) const;
  /// N/2 t^{N-1} D + (N+2)/2 t^{N+1} (P(t) + Q) + t^{N+1}/2 X(t) - (N+p+1)/(p+1) t^{N+p} L.
  double derivative(double t) const;

  /// Exponent N + p + 1 of the substitution s = t^{N+p+1}.
  double s_exponent() const noexcept { return dimension_ + p_ + 1.0; }
  const kernels::Moments& moments() const noexcept { return moments_; }

 private:
  const RadialGrid* grid_;
  const PotentialModel* V_;
  double p_;
  double dimension_;
  kernels::Moments moments_;
  std::vector<double> u_squared_;
};

double fiber_energy(const Field& u, const PotentialModel& V, double p, double t);
double fiber_derivative(const Field& u, const PotentialModel& V, double p, double t);

struct FiberScan {
  std::vector<double> t_values;
  std::vector<double> f_values;
  std::vector<double> fprime_values;
  double t_star = 0.0;
  bool s_concave = false;

  /// Number of sign changes of fprime_values.
  std::size_t sign_changes() const;
  /// "t,f,fprime" header plus one row per sample.
  std::string to_csv() const;
};

/// Log-spaced samples of f_u and f_u' on [t_min, t_max], with the concavity verdict in s.
FiberScan fiber_scan(const Field& u, const PotentialModel& V, double p, double t_min, double t_max,
                     std::size_t points);

struct FiberOptions {
  /// Log-scan attached to the result; 0 skips it.
  std::size_t scan_points = 129;
  /// Scan spans [t_star / scan_span, t_star * scan_span].
  double scan_span = 100.0;
  /// Set false when (V3) is known to fail: the maximizer then comes from a global scan.
  bool assume_concave = true;
  double global_t_min = 1e-3;
  double global_t_max = 1e3;
  std::size_t global_points = 4001;
  double tolerance = 1e-10;
  int max_expansions = 200;
};

struct FiberMaximum {
  double t_star = 0.0;
  double f_star = 0.0;
  FiberScan scan;
  std::vector<std::string> warnings;
};

/// The unique maximizer of f_u. Brackets f' by doubling/halving from t = 1, then bisects in s.
/// Throws std::invalid_argument for u == 0 and std::runtime_error when no bracket is found.
FiberMaximum maximize_fiber(const Field& u, const PotentialModel& V, double p, const FiberOptions& options = {});

/// r -> t u(r / t) on the same grid, monotone cubic interpolation, 0 beyond t r_max.
Field scale(const Field& u, double t);

struct Projection {
  Field u;
  double t_star = 1.0;   ///< fiber maximizer from the integral path
  double t_used = 1.0;   ///< after secant refinement on resampled fields
  double J_after = 0.0;
  std::vector<std::string> warnings;
};

/// scale(u, t) with t refined so that J of the resampled field vanishes to rounding.
Projection project_to_M_detailed(const Field& u, const PotentialModel& V, double p,
                                 const FiberOptions& options = {.scan_points = 0});
Field project_to_M(const Field& u, const PotentialModel& V, double p);

}  // namespace qnls
