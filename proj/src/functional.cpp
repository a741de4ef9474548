#include "qnls/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qnls {

namespace {

kernels::Moments field_moments(const Field& u, const PotentialModel& V, double p) {
  const auto sampled = kernels::sample_potential(u.grid(), V);
  return kernels::moments(u.grid(), u.values(), sampled, p);
}

}  // namespace

EnergyBreakdown energy_from_moments(const kernels::Moments& m, double p) {
  EnergyBreakdown e;
  e.dirichlet = m.dirichlet;
  e.potential = m.potential;
  e.quasilinear = m.quasilinear;
  e.nonlinear = m.nonlinear;
  e.total = 0.5 * (e.dirichlet + e.potential + e.quasilinear) - e.nonlinear / (p + 1.0);
  return e;
}

EnergyBreakdown energy(const Field& u, const PotentialModel& V, double p) {
  return energy_from_moments(field_moments(u, V, p), p);
}

double constraint_J_from_moments(const kernels::Moments& m, double p, int dimension) {
  const double N = dimension;
  return 0.5 * N * m.dirichlet + 0.5 * (N + 2.0) * (m.potential + m.quasilinear) + 0.5 * m.virial -
         (N + p + 1.0) / (p + 1.0) * m.nonlinear;
}

double constraint_J(const Field& u, const PotentialModel& V, double p) {
  return constraint_J_from_moments(field_moments(u, V, p), p, u.grid().dimension());
}

PohozaevResidual pohozaev_from_moments(const kernels::Moments& m, double p, int dimension, double a) {
  const double N = dimension;
  const double half_2mN = 0.5 * (2.0 - N);
  PohozaevResidual r;
  r.a = a;
  r.value = (half_2mN + a) * m.dirichlet + (a - 0.5 * N) * m.potential - 0.5 * m.virial +
            (2.0 * a + half_2mN) * m.quasilinear + (N / (p + 1.0) - a) * m.nonlinear;
  r.nehari_part = m.dirichlet + m.potential + 2.0 * m.quasilinear - m.nonlinear;
  r.base_part = half_2mN * m.dirichlet - 0.5 * N * m.potential - 0.5 * m.virial + half_2mN * m.quasilinear +
                N / (p + 1.0) * m.nonlinear;
  return r;
}

PohozaevResidual pohozaev_residual(const Field& u, const PotentialModel& V, double p, double a) {
  return pohozaev_from_moments(field_moments(u, V, p), p, u.grid().dimension(), a);
}

double gateaux(const Field& u, const Field& phi, const PotentialModel& V, double p) {
  require_same_grid(u, phi);
  const auto& grid = u.grid();
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  const std::size_t n = grid.size();
  double principal = 0.0;
  double lower = 0.0;
  double pointwise = 0.0;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const double du = (u[c + 1] - u[c]) / h[c];
    const double dphi = (phi[c + 1] - phi[c]) / h[c];
    const double m = 0.5 * (u[c] * u[c] + u[c + 1] * u[c + 1]);
    principal += W[c] * (1.0 + m) * du * dphi;
    lower += W[c] * 0.5 * (u[c] * phi[c] + u[c + 1] * phi[c + 1]) * du * du;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.node(i);
    pointwise += w[i] * (V(r) * u[i] - std::pow(std::abs(u[i]), p - 1.0) * u[i]) * phi[i];
  }
  return principal + lower + pointwise;
}

std::vector<double> energy_gradient(const Field& u, const PotentialModel& V, double p) {
  std::vector<double> g(u.size());
  kernels::energy_gradient(u.grid(), u.values(), kernels::sample_potential(u.grid(), V), p, g);
  return g;
}

std::vector<double> constraint_gradient(const Field& u, const PotentialModel& V, double p) {
  std::vector<double> g(u.size());
  kernels::constraint_gradient(u.grid(), u.values(), kernels::sample_potential(u.grid(), V), p, g);
  return g;
}

Field strong_residual(const Field& u, const PotentialModel& V, double p) {
  const auto& grid = u.grid();
  const double N = grid.dimension();
  const Field du = radial_derivative(u);
  const Field d2u = radial_second_derivative(u);
  std::vector<double> res(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = grid.node(i);
    const double laplacian = i == 0 ? N * d2u[0] : d2u[i] + (N - 1.0) * du[i] / r;
    res[i] = -(1.0 + u[i] * u[i]) * laplacian - u[i] * du[i] * du[i] + V(r) * u[i] -
             std::pow(std::abs(u[i]), p - 1.0) * u[i];
  }
  return Field(u.grid_ptr(), std::move(res));
}

ComparisonEnergy comparison_energy(const Field& u, double V0, double p) {
  if (!(V0 > 0.0)) throw std::invalid_argument("comparison_energy: V0 must be positive");
  const double N = u.grid().dimension();
  const auto m = field_moments(u, potentials::constant(V0), p);
  ComparisonEnergy out;
  out.ibar = 0.5 * (m.dirichlet + V0 * m.mass + m.quasilinear) - m.nonlinear / (p + 1.0);
  out.mbar_constraint = 0.5 * N * m.dirichlet + 0.5 * (N + 2.0) * (V0 * m.mass + m.quasilinear) -
                        (N + p + 1.0) / (p + 1.0) * m.nonlinear;
  const double denom = N + p + 1.0;
  out.restricted_expression = 0.5 * (p + 1.0) / denom * m.dirichlet + 0.5 * V0 * (p - 1.0) / denom * m.mass +
                              0.5 * (p - 1.0) / denom * m.quasilinear;
  return out;
}

CoercivityConstant coercivity_constant_at(double V0, double V_inf, double p, int dimension, double t) {
  if (!(V0 > 0.0) || !(V0 <= V_inf)) throw std::invalid_argument("coercivity_constant: need 0 < V0 <= V_inf");
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("coercivity_constant: t must lie in (0, 1)");
  const double N = dimension;
  const double delta = V0 / V_inf;
  const double top = std::pow(t, N + p + 1.0);
  CoercivityConstant out;
  out.t_used = t;
  out.gaps[0] = std::pow(t, N) - top;
  out.gaps[1] = std::pow(t, N + 2.0) - top;
  out.gaps[2] = delta * std::pow(t, N + 2.0) - top;
  const double smallest = std::min({out.gaps[0], out.gaps[1], out.gaps[2]});
  if (!(smallest > 0.0)) throw std::invalid_argument("coercivity_constant: t too large for delta = V0 / V_inf");
  out.gamma = 0.5 * smallest * std::min(1.0, V0);
  out.c = out.gamma / (1.0 - top);
  return out;
}

CoercivityConstant coercivity_constant(double V0, double V_inf, double p, int dimension) {
  if (!(V0 > 0.0) || !(V0 <= V_inf)) throw std::invalid_argument("coercivity_constant: need 0 < V0 <= V_inf");
  const double delta = V0 / V_inf;
  double t = 0.5;
  while (!(delta > std::pow(t, p - 1.0))) t *= 0.5;
  return coercivity_constant_at(V0, V_inf, p, dimension, t);
}

double coercivity_norm(const Field& u) {
  const auto m = field_moments(u, potentials::constant(0.0), 2.0);
  return m.mass + m.dirichlet + m.quasilinear;
}

}  // namespace qnls
