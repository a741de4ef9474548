#pragma once

#include <span>
#include <vector>

#include "qnls/grid.hpp"
#include "qnls/potential.hpp"

/// Data-parallel reductions behind every functional.
///
/// Each kernel exists twice: a plain serial loop kept as the reference, and an
/// OpenMP version that sums fixed-size chunks in parallel and then combines the
/// chunk totals in index order. The chunk layout does not depend on the thread
/// count, so parallel results are bitwise reproducible across runs and thread
/// counts; they differ from the serial reference only by summation order.
namespace qnls::kernels {

enum class Exec { serial, parallel };

/// Below this many nodes the OpenMP path runs on one thread.
inline constexpr std::size_t kParallelThreshold = 4096;
inline constexpr std::size_t kChunk = 1024;

/// The integrals every energy-type functional is assembled from.
///   dirichlet   = sum_c W_c (du_c)^2                 ~ int |grad u|^2
///   mass        = sum_i w_i u_i^2                    ~ int u^2
///   potential   = sum_i w_i V_i u_i^2                ~ int V u^2
///   quasilinear = sum_c W_c (u_c^2 + u_{c+1}^2)/2 (du_c)^2   ~ int u^2 |grad u|^2
///   nonlinear   = sum_i w_i |u_i|^{p+1}              ~ int |u|^{p+1}
///   virial      = sum_i w_i (r V')_i u_i^2           ~ int (x . grad V) u^2
struct Moments {
  double dirichlet = 0.0;
  double mass = 0.0;
  double potential = 0.0;
  double quasilinear = 0.0;
  double nonlinear = 0.0;
  double virial = 0.0;
};

/// V and r V'(r) sampled at the grid nodes.
struct SampledPotential {
  std::vector<double> value;
  std::vector<double> radial_moment;
  bool constant = false;
};

SampledPotential sample_potential(const RadialGrid& grid, const PotentialModel& V);

Moments moments(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                Exec exec = Exec::parallel);

/// (sum_i w_i V(t r_i) u_i^2, sum_i w_i (t r_i) V'(t r_i) u_i^2).
struct DilatedPotential {
  double potential = 0.0;
  double virial = 0.0;
};
DilatedPotential dilated_potential(const RadialGrid& grid, std::span<const double> u_squared,
                                   const PotentialModel& V, double t, Exec exec = Exec::parallel);

/// Nodal gradient of I_h(u) = (dirichlet + potential + quasilinear)/2 - nonlinear/(p+1).
void energy_gradient(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                     std::span<double> out, Exec exec = Exec::parallel);

/// Nodal gradient of J_h(u) = N/2 dirichlet + (N+2)/2 (potential + quasilinear) + virial/2
///                            - (N+p+1)/(p+1) nonlinear.
void constraint_gradient(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                         std::span<double> out, Exec exec = Exec::parallel);

/// sum_i a_i b_i with the same chunked reduction.
double dot(std::span<const double> a, std::span<const double> b, Exec exec = Exec::parallel);

}  // namespace qnls::kernels
