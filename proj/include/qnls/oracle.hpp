#pragma once

#include <string>
#include <vector>

#include "qnls/grid.hpp"

namespace qnls {

/// Radial shooting for
///   (1 + u^2)(u'' + (N-1) u'/r) + u (u')^2 = V u - u^p,   u(0) = s0, u'(0) = 0,
/// with constant V. Shares nothing with the variational solver except the grid.
enum class ShotOutcome { undershoot, overshoot, converged };

std::string to_string(ShotOutcome outcome);

struct ShootResult {
  double s0 = 0.0;
  ShotOutcome classification = ShotOutcome::converged;
  double r_exit = 0.0;     ///< radius where the outcome was decided
  std::vector<double> r;   ///< RK4 nodes up to r_exit
  std::vector<double> u;
  std::vector<double> du;
  Field profile;           ///< on the uniform step grid over [0, r_max], 0 past r_exit
};

/// Classic RK4 with step dr. Undershoot: u crosses 0. Overshoot: u' > 0 while u > 0, or u still
/// positive at r_max. Converged: u drops below 1e-8 s0 while still decreasing.
/// Throws std::invalid_argument unless s0 > V^{1/(p-1)}; std::runtime_error on overflow.
ShootResult shoot(double s0, double V, double p, int dimension, double r_max, double dr = 1e-3);

struct OracleOptions {
  double r_max = 40.0;   ///< integration range; the decaying branch separates well before this
  double dr = 1e-3;
  std::size_t scan_points = 48;  ///< geometric s0 ladder from V^{1/(p-1)} to 1e3 V^{1/(p-1)}
};

struct OracleCandidate {
  double s0 = 0.0;
  double r_exit = 0.0;
  double energy = 0.0;
};

struct OracleProfile {
  Field profile;       ///< on the requested grid
  double energy = 0.0; ///< I(profile)
  double s0 = 0.0;
  double r_exit = 0.0;
  std::vector<OracleCandidate> candidates;  ///< every decaying s0 found (u(r_exit) <= 1e-6 s0), lowest energy selected
};

/// Bisects s0 between overshoot and undershoot on every bracket of the ladder, transfers each
/// decaying shot to `target` (cubic Hermite on [0, r_exit], linearized exponential tail beyond),
/// and returns the one with the lowest I. Throws std::runtime_error if no bracket exists.
OracleProfile find_ground_profile(double V, double p, const GridPtr& target, const OracleOptions& options = {});

}  // namespace qnls
