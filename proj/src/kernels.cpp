#include "qnls/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace qnls::kernels {

namespace {

Moments& operator+=(Moments& a, const Moments& b) {
  a.dirichlet += b.dirichlet;
  a.mass += b.mass;
  a.potential += b.potential;
  a.quasilinear += b.quasilinear;
  a.nonlinear += b.nonlinear;
  a.virial += b.virial;
  return a;
}

// Node contributions for i in [lo, hi) and cell contributions for c in [lo, min(hi, n-1)).
Moments moments_range(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                      std::size_t lo, std::size_t hi) {
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  const std::size_t n = u.size();
  Moments m;
  for (std::size_t i = lo; i < hi; ++i) {
    const double u2 = u[i] * u[i];
    m.mass += w[i] * u2;
    m.potential += w[i] * V.value[i] * u2;
    m.virial += w[i] * V.radial_moment[i] * u2;
    m.nonlinear += w[i] * std::pow(std::abs(u[i]), p + 1.0);
    if (i + 1 < n) {
      const double d = (u[i + 1] - u[i]) / h[i];
      const double dd = W[i] * d * d;
      m.dirichlet += dd;
      m.quasilinear += 0.5 * (u2 + u[i + 1] * u[i + 1]) * dd;
    }
  }
  return m;
}

bool use_threads(Exec exec, std::size_t n) { return exec == Exec::parallel && n >= kParallelThreshold; }

template <class Partial, class Body>
Partial chunked_reduce(std::size_t n, Exec exec, Body body) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Partial> partial(chunks);
  const bool threaded = use_threads(exec, n);
#pragma omp parallel for schedule(static) if (threaded)
  for (std::size_t k = 0; k < chunks; ++k) {
    const std::size_t lo = k * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    partial[k] = body(lo, hi);
  }
  Partial total{};
  for (const auto& part : partial) total += part;
  return total;
}

void check_sizes(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V) {
  if (u.size() != grid.size() || V.value.size() != grid.size() || V.radial_moment.size() != grid.size()) {
    throw std::invalid_argument("kernels: array sizes do not match the grid");
  }
}

}  // namespace

SampledPotential sample_potential(const RadialGrid& grid, const PotentialModel& V) {
  SampledPotential s;
  s.constant = V.is_constant();
  s.value.resize(grid.size());
  s.radial_moment.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    s.value[i] = V(r);
    s.radial_moment[i] = s.constant ? 0.0 : V.radial_moment(r);
  }
  return s;
}

Moments moments(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                Exec exec) {
  check_sizes(grid, u, V);
  if (exec == Exec::serial) return moments_range(grid, u, V, p, 0, u.size());
  return chunked_reduce<Moments>(u.size(), exec, [&](std::size_t lo, std::size_t hi) {
    return moments_range(grid, u, V, p, lo, hi);
  });
}

namespace {

struct PotentialPair {
  double potential = 0.0;
  double virial = 0.0;
  PotentialPair& operator+=(const PotentialPair& o) {
    potential += o.potential;
    virial += o.virial;
    return *this;
  }
};

PotentialPair dilated_range(const RadialGrid& grid, std::span<const double> u_sq, const PotentialModel& V,
                            double t, std::size_t lo, std::size_t hi) {
  const auto w = grid.weights();
  PotentialPair out;
  for (std::size_t i = lo; i < hi; ++i) {
    if (w[i] == 0.0 || u_sq[i] == 0.0) continue;
    const double y = t * grid.node(i);
    out.potential += w[i] * V(y) * u_sq[i];
    out.virial += w[i] * V.radial_moment(y) * u_sq[i];
  }
  return out;
}

}  // namespace

DilatedPotential dilated_potential(const RadialGrid& grid, std::span<const double> u_squared,
                                   const PotentialModel& V, double t, Exec exec) {
  if (u_squared.size() != grid.size()) throw std::invalid_argument("kernels: array sizes do not match the grid");
  PotentialPair pair;
  if (exec == Exec::serial) {
    pair = dilated_range(grid, u_squared, V, t, 0, grid.size());
  } else {
    pair = chunked_reduce<PotentialPair>(grid.size(), exec, [&](std::size_t lo, std::size_t hi) {
      return dilated_range(grid, u_squared, V, t, lo, hi);
    });
  }
  return {pair.potential, pair.virial};
}

namespace {

// Coefficients of the nodal gradient of
//   a_D dirichlet + a_P potential + a_Q quasilinear + a_X virial - a_L nonlinear.
struct GradientCoefficients {
  double dirichlet;
  double potential;
  double quasilinear;
  double virial;
  double nonlinear;
};

void gradient_range(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                    const GradientCoefficients& k, std::span<double> out, std::size_t lo, std::size_t hi) {
  const auto w = grid.weights();
  const auto W = grid.cell_weights();
  const auto h = grid.cell_widths();
  const std::size_t n = u.size();
  for (std::size_t i = lo; i < hi; ++i) {
    const double ui = u[i];
    double g = w[i] * ui *
               (2.0 * k.potential * V.value[i] + 2.0 * k.virial * V.radial_moment[i] -
                k.nonlinear * (p + 1.0) * std::pow(std::abs(ui), p - 1.0));
    // Cell to the left: d = (u_i - u_{i-1}) / h, d d/du_i = 1/h.
    if (i > 0) {
      const std::size_t c = i - 1;
      const double d = (ui - u[c]) / h[c];
      const double m = 0.5 * (u[c] * u[c] + ui * ui);
      g += W[c] * (2.0 * (k.dirichlet + k.quasilinear * m) * d / h[c] + k.quasilinear * ui * d * d);
    }
    // Cell to the right: d = (u_{i+1} - u_i) / h, d d/du_i = -1/h.
    if (i + 1 < n) {
      const std::size_t c = i;
      const double d = (u[i + 1] - ui) / h[c];
      const double m = 0.5 * (ui * ui + u[i + 1] * u[i + 1]);
      g += W[c] * (-2.0 * (k.dirichlet + k.quasilinear * m) * d / h[c] + k.quasilinear * ui * d * d);
    }
    out[i] = g;
  }
}

void gradient(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
              const GradientCoefficients& k, std::span<double> out, Exec exec) {
  check_sizes(grid, u, V);
  if (out.size() != u.size()) throw std::invalid_argument("kernels: output size does not match the grid");
  const std::size_t n = u.size();
  if (exec == Exec::serial) {
    gradient_range(grid, u, V, p, k, out, 0, n);
    return;
  }
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  const bool threaded = use_threads(exec, n);
#pragma omp parallel for schedule(static) if (threaded)
  for (std::size_t c = 0; c < chunks; ++c) {
    gradient_range(grid, u, V, p, k, out, c * kChunk, std::min(n, (c + 1) * kChunk));
  }
}

}  // namespace

void energy_gradient(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                     std::span<double> out, Exec exec) {
  gradient(grid, u, V, p, {0.5, 0.5, 0.5, 0.0, 1.0 / (p + 1.0)}, out, exec);
}

void constraint_gradient(const RadialGrid& grid, std::span<const double> u, const SampledPotential& V, double p,
                         std::span<double> out, Exec exec) {
  const double N = grid.dimension();
  gradient(grid, u, V, p, {0.5 * N, 0.5 * (N + 2.0), 0.5 * (N + 2.0), 0.5, (N + p + 1.0) / (p + 1.0)}, out, exec);
}

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  if (a.size() != b.size()) throw std::invalid_argument("kernels: dot of mismatched sizes");
  struct Sum {
    double value = 0.0;
    Sum& operator+=(const Sum& o) {
      value += o.value;
      return *this;
    }
  };
  auto body = [&](std::size_t lo, std::size_t hi) {
    Sum s;
    for (std::size_t i = lo; i < hi; ++i) s.value += a[i] * b[i];
    return s;
  };
  if (exec == Exec::serial) return body(0, a.size()).value;
  return chunked_reduce<Sum>(a.size(), exec, body).value;
}

}  // namespace qnls::kernels
