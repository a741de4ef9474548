#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnls/fiber.hpp"

namespace qnls {

struct InitSpec {
  enum class Kind { gaussian, bump, file };
  Kind kind = Kind::gaussian;
  double width = 2.0;   ///< gaussian: e^{-r^2 / width^2}
  double radius = 6.0;  ///< bump: (1 - (r / radius)^2)^2 on [0, radius]
  std::string path;     ///< file: "# r u" two-column text
};

struct SolveConfig {
  double p = 2.0;
  PotentialModel potential = potentials::constant(1.0);
  GridPtr grid;
  InitSpec init;
  int max_iters = 4000;
  double step0 = 1.0;
  /// Residuals are divided by ||u||_{H^1} before the comparison.
  double tol_weak = 1e-4;     ///< max_k |<I'(u), phi_k>| / ||phi_k||_{H^1}
  double tol_J = 1e-8;        ///< |J(u)|, absolute
  double tol_tangent = 1e-6;  ///< ||I'(u) - lambda J'(u)||_{H^{-1}}
  double armijo = 1e-4;
  /// false when (V3) fails: fiber maxima then come from global scans.
  bool assume_concave = true;
  int max_restarts = 3;
};

/// Pohozaev residuals at a = -1, 0, 1.
struct PohozaevTriple {
  PohozaevResidual minus_one;
  PohozaevResidual zero;
  PohozaevResidual one;
};

struct SolveReport {
  explicit SolveReport(Field u) : u_star(std::move(u)) {}

  Field u_star;
  double m = 0.0;
  EnergyBreakdown energy;
  int iterations = 0;
  int restarts = 0;
  std::vector<double> energy_history;
  std::vector<double> weak_residual_history;
  std::vector<double> tangent_residual_history;
  std::vector<double> J_history;
  std::vector<double> t_star_history;
  double weak_residual = 0.0;
  double tangent_residual = 0.0;
  double multiplier = 0.0;  ///< lambda in I'(u) = lambda J'(u) on the grid
  PohozaevTriple pohozaev;
  bool positivity = false;  ///< u_star >= 0 before the absolute value was applied
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Field the solve starts from, before the first projection.
Field initial_field(const GridPtr& grid, const InitSpec& init);

/// Cos^2 bumps of half-width 4 nodes centred at every 4th node, each vanishing at r_max.
std::vector<Field> test_basis(const GridPtr& grid);

/// H^1 norm (cell stiffness plus node mass) used for the residuals.
double h1_norm(const Field& phi);

/// max over the test basis and u itself of |<I'(u), phi>| / ||phi||_{H^1}, divided by ||u||_{H^1}.
double weak_residual(const Field& u, const PotentialModel& V, double p);

/// Solves (stiffness + mass) g = rhs with g(r_max) = 0.
std::vector<double> precondition(const RadialGrid& grid, std::span<const double> rhs);

/// Projected, preconditioned descent of I on the Pohozaev manifold.
SolveReport minimize_ground_state(const SolveConfig& cfg);

struct DeformOptions {
  double tol_J_relative = 1e-8;  ///< |J(u)| <= tol * (D + |P| + Q + L) counts as u on M
  int max_halvings = 20;
  double min_relative_decrease = 1e-12;
};

struct Improvement {
  Field improved;
  double I_improved = 0.0;
  double eps_used = 0.0;
  double t0 = 1.0;
};

/// Follows gamma(t) = u_t + eps eta(t) phi across M and returns the crossing if it lowers I.
/// Throws std::invalid_argument unless u lies on M and <I'(u), phi> < 0.
std::optional<Improvement> deform_improve(const Field& u, const Field& phi, const PotentialModel& V, double p,
                                          double eps, const DeformOptions& options = {});

/// Nodewise |u|.
Field positivity_project(const Field& u);

}  // namespace qnls
