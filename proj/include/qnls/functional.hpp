#pragma once

#include <vector>

#include "qnls/grid.hpp"
#include "qnls/kernels.hpp"
#include "qnls/potential.hpp"

namespace qnls {

/// The four integrals of I(u) = 1/2 (int |grad u|^2 + V u^2 + u^2 |grad u|^2) - 1/(p+1) int |u|^{p+1}.
struct EnergyBreakdown {
  double dirichlet = 0.0;
  double potential = 0.0;
  double quasilinear = 0.0;
  double nonlinear = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const Field& u, const PotentialModel& V, double p);
EnergyBreakdown energy_from_moments(const kernels::Moments& m, double p);

/// Dilation derivative J(u) = f_u'(1); its zero set is the Pohozaev manifold M.
double constraint_J(const Field& u, const PotentialModel& V, double p);
double constraint_J_from_moments(const kernels::Moments& m, double p, int dimension);

/// Pohozaev family R_a(u) = base_part + a * nehari_part.
struct PohozaevResidual {
  double a = 0.0;
  double value = 0.0;
  double nehari_part = 0.0;  ///< <I'(u), u> = int |grad u|^2 + V u^2 + 2 u^2 |grad u|^2 - |u|^{p+1}
  double base_part = 0.0;
};

PohozaevResidual pohozaev_residual(const Field& u, const PotentialModel& V, double p, double a);
PohozaevResidual pohozaev_from_moments(const kernels::Moments& m, double p, int dimension, double a);

/// <I'(u), phi> = int (1 + u^2) grad u . grad phi + u |grad u|^2 phi + V u phi - |u|^{p-1} u phi,
/// with the same cell/node quadratures as I, so it is the exact derivative of the discrete energy.
double gateaux(const Field& u, const Field& phi, const PotentialModel& V, double p);

/// Nodal gradients of the discrete I and J (gateaux(u, phi) == sum_i grad_i phi_i).
std::vector<double> energy_gradient(const Field& u, const PotentialModel& V, double p);
std::vector<double> constraint_gradient(const Field& u, const PotentialModel& V, double p);

/// -(1 + u^2)(u'' + (N-1) u'/r) - u (u')^2 + V u - |u|^{p-1} u, with (N-1) u''(0) at r = 0.
Field strong_residual(const Field& u, const PotentialModel& V, double p);

/// The comparison functional with V replaced by V0.
struct ComparisonEnergy {
  double ibar = 0.0;
  double mbar_constraint = 0.0;        ///< g_u'(1) for the constant potential V0
  double restricted_expression = 0.0;  ///< value of Ibar on {g_u'(1) = 0}
};

ComparisonEnergy comparison_energy(const Field& u, double V0, double p);

/// c with I(u) >= c int (u^2 + |grad u|^2 + u^2 |grad u|^2) on M.
struct CoercivityConstant {
  double c = 0.0;
  double t_used = 0.0;
  double gamma = 0.0;
  double gaps[3] = {0.0, 0.0, 0.0};  ///< t^N - t^{N+p+1}, t^{N+2} - t^{N+p+1}, delta t^{N+2} - t^{N+p+1}
};

/// Starts at t = 1/2 and halves t until delta = V0 / V_inf exceeds t^{p-1}.
CoercivityConstant coercivity_constant(double V0, double V_inf, double p, int dimension);
/// Same construction at a caller-chosen t in (0, 1); throws if a gap is not positive.
CoercivityConstant coercivity_constant_at(double V0, double V_inf, double p, int dimension, double t);

/// int (u^2 + |grad u|^2 + u^2 |grad u|^2).
double coercivity_norm(const Field& u);

}  // namespace qnls
