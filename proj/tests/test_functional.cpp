#include <doctest.h>

#include "qnls/fiber.hpp"
#include "qnls/functional.hpp"
#include "support.hpp"

using namespace qnls;
using namespace qnls::testing;

namespace {
const auto V1 = potentials::constant(1.0);
const auto VL = potentials::shifted_lorentz(2.0, 1.0, 1.0);
}  // namespace

TEST_CASE("energy of zero") {
  auto g = build_grid(3, 5.0, 101);
  const auto e = energy(Field::zeros(g), V1, 2.0);
  CHECK(e.dirichlet == 0.0);
  CHECK(e.potential == 0.0);
  CHECK(e.quasilinear == 0.0);
  CHECK(e.nonlinear == 0.0);
  CHECK(e.total == 0.0);
  CHECK(constraint_J(Field::zeros(g), V1, 2.0) == 0.0);
  for (double a : {-1.0, 0.0, 2.0}) CHECK(pohozaev_residual(Field::zeros(g), V1, 2.0, a).value == 0.0);
  CHECK(gateaux(Field::zeros(g), gaussian(g), V1, 2.0) == 0.0);
}

TEST_CASE("gaussian moments, p = 3") {
  auto g = build_grid(3, 10.0, 6401);
  const auto e = energy(gaussian(g), V1, 3.0);
  const double a = std::pow(pi / 2.0, 1.5);
  const double b = std::pow(pi / 4.0, 1.5);
  CHECK(rel(e.dirichlet, 3.0 * a) < 1e-5);
  CHECK(rel(e.potential, a) < 1e-5);
  CHECK(rel(e.nonlinear, b) < 1e-5);
  CHECK(rel(e.quasilinear, 1.5 * b) < 1e-5);
  CHECK(e.total == 0.5 * (e.dirichlet + e.potential + e.quasilinear) - e.nonlinear / 4.0);
}

TEST_CASE("gaussian energies at p = 2 and p = 3 order like the closed forms") {
  auto g = build_grid(3, 10.0, 3201);
  const double quad = energy(gaussian(g), V1, 2.0).total - energy(gaussian(g), V1, 3.0).total;
  const double exact = -std::pow(pi / 3.0, 1.5) / 3.0 + std::pow(pi / 4.0, 1.5) / 4.0;
  CHECK(quad * exact > 0.0);
  CHECK(rel(quad, exact) < 1e-4);
}

TEST_CASE("energy parts are nonnegative for V >= 0") {
  auto g = build_grid(3, 12.0, 241);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto e = energy(random_mixture(g, rng), VL, 2.5);
    CHECK(e.dirichlet >= 0.0);
    CHECK(e.potential >= 0.0);
    CHECK(e.quasilinear >= 0.0);
    CHECK(e.nonlinear >= 0.0);
  }
}

TEST_CASE("J at t = 1 is the fiber derivative") {
  auto g = build_grid(3, 10.0, 401);
  const auto u = gaussian(g);
  CHECK(rel(constraint_J(u, V1, 2.0), fiber_derivative(u, V1, 2.0, 1.0)) < 1e-10);
}

TEST_CASE("constant V: the virial term vanishes") {
  auto g = build_grid(3, 10.0, 401);
  const auto m = kernels::moments(*g, gaussian(g).values(), kernels::sample_potential(*g, V1), 2.0);
  CHECK(m.virial == 0.0);
}

TEST_CASE("cross-functional identities on random fields") {
  auto g = build_grid(3, 12.0, 401);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto u = random_mixture(g, rng);
    const auto& V = k % 2 ? V1 : VL;
    const double p = 1.5 + 0.1 * k;
    const double J = constraint_J(u, V, p);
    const auto rm = pohozaev_residual(u, V, p, -1.0);
    const auto r0 = pohozaev_residual(u, V, p, 0.0);
    const auto r1 = pohozaev_residual(u, V, p, 1.0);
    const double scale = std::abs(r0.base_part) + std::abs(r0.nehari_part);
    CHECK(std::abs(J + rm.value) <= 1e-12 * scale);
    CHECK(std::abs(gateaux(u, u, V, p) - r0.nehari_part) <= 1e-12 * scale);
    CHECK(std::abs((r1.value - r0.value) - r0.nehari_part) <= 1e-12 * scale);
    CHECK(std::abs(r1.value - 2.0 * r0.value + rm.value) <= 1e-12 * scale);
  }
}

TEST_CASE("nodal gradients reproduce gateaux") {
  auto g = build_grid(3, 12.0, 301);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto u = random_mixture(g, rng);
    const auto phi = random_mixture(g, rng);
    const auto gI = energy_gradient(u, VL, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < gI.size(); ++i) s += gI[i] * phi[i];
    CHECK(s == doctest::Approx(gateaux(u, phi, VL, 2.0)).epsilon(1e-11));

    // J'(u) by central differences of J.
    const auto gJ = constraint_gradient(u, VL, 2.0);
    double sj = 0.0;
    for (std::size_t i = 0; i < gJ.size(); ++i) sj += gJ[i] * phi[i];
    const double eps = 1e-4;
    const double fd = (constraint_J(u + eps * phi, VL, 2.0) - constraint_J(u + (-eps) * phi, VL, 2.0)) / (2.0 * eps);
    CHECK(fd == doctest::Approx(sj).epsilon(1e-6));
  }
}

TEST_CASE("gateaux against central differences of I") {
  auto g = build_grid(3, 10.0, 401);
  const auto u = gaussian(g, 1.2, 1.5);
  const auto phi = gaussian(g, 0.8, -0.7);
  const double exact = gateaux(u, phi, V1, 2.0);
  double last = 0.0;
  for (double eps : {1e-3, 1e-4}) {
    const double fd = (energy(u + eps * phi, V1, 2.0).total - energy(u + (-eps) * phi, V1, 2.0).total) / (2.0 * eps);
    const double err = std::abs(fd - exact);
    CHECK(err <= 1e-5 * std::abs(exact));
    if (last > 0.0) CHECK(err < last);
    last = err;
  }
}

TEST_CASE("strong residual") {
  auto g = build_grid(3, 5.0, 101);
  const auto z = strong_residual(Field::zeros(g), V1, 2.0);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == 0.0);
  const double c = 0.7;
  const double v = 1.8;
  const auto r = strong_residual(Field::sample(g, [=](double) { return c; }), potentials::constant(v), 3.0);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == doctest::Approx(c * v - std::pow(c, 3.0)).epsilon(1e-14));
}

TEST_CASE("comparison functional") {
  auto g = build_grid(3, 12.0, 401);
  const auto z = comparison_energy(Field::zeros(g), 1.0, 2.0);
  CHECK(z.ibar == 0.0);
  CHECK(z.mbar_constraint == 0.0);
  CHECK(z.restricted_expression == 0.0);

  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto u = random_mixture(g, rng);
    // Ibar <= I when V >= V0.
    CHECK(comparison_energy(u, VL.V0(), 2.0).ibar <= energy(u, VL, 2.0).total);
    // On Mbar the restricted expression equals Ibar.
    const auto w = project_to_M(u, potentials::constant(VL.V0()), 2.0);
    const auto c = comparison_energy(w, VL.V0(), 2.0);
    const auto e = energy(w, potentials::constant(VL.V0()), 2.0);
    CHECK(std::abs(c.mbar_constraint) <= 1e-9 * (e.dirichlet + e.potential + e.quasilinear + e.nonlinear));
    CHECK(std::abs(c.ibar - c.restricted_expression) <= 1e-10 * std::abs(c.ibar));
  }
}

TEST_CASE("coercivity constant") {
  const auto c = coercivity_constant_at(1.0, 1.0, 2.0, 3, 0.5);
  CHECK(c.gaps[0] == doctest::Approx(7.0 / 64.0));
  CHECK(c.gaps[1] == doctest::Approx(1.0 / 64.0));
  CHECK(c.gaps[2] == doctest::Approx(1.0 / 64.0));
  CHECK(c.c == doctest::Approx(1.0 / 126.0));
  for (double t : {0.1, 0.5, 0.9}) CHECK(coercivity_constant_at(1.0, 1.0, 3.0, 3, t).c > 0.0);

  const auto d = coercivity_constant(1.0, 2.0, 2.0, 3);
  CHECK(d.c > 0.0);
  CHECK(0.5 > std::pow(d.t_used, 1.0));
  CHECK_THROWS_AS(coercivity_constant_at(1.0, 2.0, 2.0, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(coercivity_constant(2.0, 1.0, 2.0, 3), std::invalid_argument);

  auto g = build_grid(3, 15.0, 401);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const auto u = project_to_M(random_mixture(g, rng), VL, 2.0);
    CHECK(energy(u, VL, 2.0).total >= d.c * coercivity_norm(u));
  }
}
