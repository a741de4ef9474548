#include <doctest.h>

#include "qnls/diagnostics.hpp"
#include "qnls/solver.hpp"
#include "support.hpp"

using namespace qnls;
using namespace qnls::testing;

namespace {
const auto V1 = potentials::constant(1.0);

double cell_dirichlet(const Field& u) { return energy(u, V1, 2.0).dirichlet; }
}  // namespace

TEST_CASE("condpoho on zero and on a gaussian") {
  auto g = build_grid(3, 10.0, 801);
  const auto z = condpoho_check(Field::zeros(g), V1, 2.0);
  CHECK(z.i1 == 0.0);
  CHECK(z.i2 == 0.0);
  CHECK(z.i3 == 0.0);

  const auto u = gaussian(g);
  const auto c = condpoho_check(u, V1, 2.0);
  CHECK(c.finite);
  CHECK(c.hardy_constant == doctest::Approx(2.0));
  CHECK(c.i2 <= c.holder2);
  CHECK(c.holder2 <= c.hardy2);
  CHECK(c.i3 <= c.holder3);
  CHECK(c.holder3 <= c.hardy3);

  // (int u^4 / r^2)^{1/2} (4 int u^2 |grad u|^2)^{1/2} by independent quadrature.
  double a = 0.0, b = 0.0;
  const double area = 4.0 * pi;
  for (int k = 1; k <= 200000; ++k) {
    const double r = 10.0 * (k - 0.5) / 200000.0;
    const double e = std::exp(-r * r);
    a += std::pow(e, 4.0) / (r * r) * area * r * r;
    b += 4.0 * e * e * 4.0 * r * r * e * e * area * r * r;
  }
  a *= 10.0 / 200000.0;
  b *= 10.0 / 200000.0;
  CHECK(c.i3 <= std::sqrt(a) * std::sqrt(b));
}

TEST_CASE("sup norm") {
  auto g = build_grid(3, 10.0, 201);
  CHECK(linf_bound(Field::zeros(g)).value == 0.0);
  const auto b = linf_bound(gaussian(g));
  CHECK(b.value == 1.0);
  CHECK(b.r == 0.0);
}

TEST_CASE("decay fit") {
  auto g = build_grid(3, 10.0, 401);
  const auto e = decay_fit(Field::sample(g, [](double r) { return 3.0 * std::exp(-2.0 * r); }));
  CHECK(e.rate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(e.amplitude == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(e.fit_residual < 1e-8);
  const auto gs = decay_fit(gaussian(build_grid(3, 5.0, 401)));
  CHECK(gs.fit_residual > 0.1);
  CHECK_THROWS_AS(decay_fit(Field::zeros(g)), std::domain_error);
}

TEST_CASE("decay rate is stable when the domain doubles") {
  SolveConfig a;
  a.grid = build_grid(3, 20.0, 801);
  SolveConfig b = a;
  b.grid = build_grid(3, 40.0, 1601);
  const auto ra = minimize_ground_state(a);
  const auto rb = minimize_ground_state(b);
  REQUIRE(ra.converged);
  REQUIRE(rb.converged);
  const double la = decay_fit(ra.u_star).rate;
  const double lb = decay_fit(rb.u_star).rate;
  CHECK(la > 0.0);
  CHECK(std::abs(la - lb) <= 0.1 * lb);
  CHECK(condpoho_check(ra.u_star, V1, 2.0).finite);
}

TEST_CASE("cutoff function") {
  const double R = 2.0;
  CHECK(split_eta(0.0, R) == 1.0);
  CHECK(split_eta(R, R) == 1.0);
  CHECK(split_eta(2.0 * R, R) == 0.0);
  CHECK(split_eta(5.0 * R, R) == 0.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double r = R + R * k / 10000.0;
    const double d = (split_eta(r + 1e-6, R) - split_eta(r - 1e-6, R)) / 2e-6;
    worst = std::max(worst, std::abs(d));
    CHECK(split_eta(r, R) >= 0.0);
    CHECK(split_eta(r, R) <= 1.0);
  }
  CHECK(worst <= 2.0 / R);
}

TEST_CASE("split is an exact partition") {
  auto g = build_grid(3, 12.0, 401);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const auto u = random_mixture(g, rng);
    const auto s = split_cutoff(u, 1.0 + 0.2 * k);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(s.v[i] + s.w[i] == u[i]);
    // Cross term: D(u) - D(v) - D(w) = 2 int grad v . grad w.
    const auto dv = cell_gradient(s.v);
    const auto dw = cell_gradient(s.w);
    double cross = 0.0;
    for (std::size_t c = 0; c < dv.size(); ++c) cross += g->cell_weights()[c] * dv[c] * dw[c];
    CHECK(cell_dirichlet(u) - cell_dirichlet(s.v) - cell_dirichlet(s.w) ==
          doctest::Approx(2.0 * cross).epsilon(1e-9).scale(cell_dirichlet(u)));
  }
  CHECK_THROWS_AS(split_cutoff(gaussian(g), 6.0), std::invalid_argument);
  CHECK_THROWS_AS(split_cutoff(gaussian(g), 0.0), std::invalid_argument);
}

TEST_CASE("compactly supported fields split trivially") {
  auto g = build_grid(3, 12.0, 401);
  const auto u = Field::sample(g, [](double r) { return r < 1.5 ? std::pow(1.0 - (r / 1.5) * (r / 1.5), 3) : 0.0; });
  const auto s = split_cutoff(u, 2.0);
  CHECK(x_norms(s.w).d_X_to_zero <= 1e-10);
  const auto e = splitting_energy_error(u, 2.0, V1, 2.0, {0.5, 1.0, 2.0});
  for (double err : e.errors) CHECK(err <= 1e-10);
}

TEST_CASE("splitting error shrinks with R") {
  auto g = build_grid(3, 12.0, 801);
  const auto u = gaussian(g);
  std::vector<double> last(3, 1e300);
  for (double R : {2.0, 3.0, 4.0}) {
    const auto e = splitting_energy_error(u, R, V1, 2.0, {0.5, 1.0, 2.0});
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(e.errors[k] < last[k]);
      last[k] = e.errors[k];
    }
  }
  std::vector<double> ts;
  for (int k = 0; k <= 16; ++k) ts.push_back(0.25 * std::pow(16.0, k / 16.0));
  const auto e = splitting_energy_error(u, 2.0, V1, 2.0, ts);
  CHECK(e.eps_R > 0.0);
  CHECK(e.C > 0.0);
  CHECK(e.C_min <= e.C);
  // Sub-linear in t^N + t^{N+p+1}: the ratio never grows along the scan.
  double previous = 1e300;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double ratio = e.errors[k] / (e.eps_R * (std::pow(ts[k], 3.0) + std::pow(ts[k], 6.0)));
    CHECK(ratio <= e.C * (1.0 + 1e-12));
    CHECK(ratio <= previous);
    previous = ratio;
  }
  // A constant fitted on three t values bounds the whole range within a factor 4.
  const auto fit = splitting_energy_error(u, 2.0, V1, 2.0, {0.5, 1.0, 2.0});
  CHECK(e.C <= 4.0 * fit.C);
}

TEST_CASE("sphere fraction") {
  CHECK(sphere_fraction_in_ball(3, 1.0, 0.0, 2.0) == 1.0);
  CHECK(sphere_fraction_in_ball(3, 3.0, 0.0, 2.0) == 0.0);
  CHECK(sphere_fraction_in_ball(3, 0.0, 1.0, 2.0) == 1.0);
  for (double r : {0.5, 1.0, 2.0}) {
    const double y = 1.5, R = 1.2;
    if (std::abs(r - y) < R && r + y > R) {
      CHECK(sphere_fraction_in_ball(3, r, y, R) == doctest::Approx((R * R - (r - y) * (r - y)) / (4.0 * r * y)));
    }
  }
  // N = 4: fraction = (theta - sin theta cos theta) / pi.
  const double r = 1.0, y = 1.0, R = 1.0;
  const double th = std::acos((r * r + y * y - R * R) / (2.0 * r * y));
  CHECK(sphere_fraction_in_ball(4, r, y, R) == doctest::Approx((th - std::sin(th) * std::cos(th)) / pi).epsilon(1e-8));
}

TEST_CASE("vanishing functional") {
  auto g = build_grid(3, 20.0, 801);
  CHECK(vanishing_sup(Field::zeros(g), 2.0, 16, 2.0) == 0.0);
  const auto bump = Field::sample(g, [](double r) { return r < 1.0 ? std::pow(1.0 - r * r, 2) : 0.0; });
  const double total = energy(bump, V1, 2.0).nonlinear;
  CHECK(vanishing_sup(bump, 3.0, 32, 2.0) == doctest::Approx(total).epsilon(1e-12));

  // Same int |u|^{p+1}, spread over a larger region.
  const double p = 2.0;
  const auto u = gaussian(g, 0.8);
  const double t = 4.0;
  Field spread = scale(u, t);
  spread *= std::pow(energy(u, V1, p).nonlinear / energy(spread, V1, p).nonlinear, 1.0 / (p + 1.0));
  CHECK(energy(spread, V1, p).nonlinear == doctest::Approx(energy(u, V1, p).nonlinear));
  CHECK(vanishing_sup(spread, 1.0, 64, p) < vanishing_sup(u, 1.0, 64, p));

  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    const auto f = random_mixture(g, rng);
    CHECK(vanishing_sup(f, 1.5, 16, p) <= energy(f, V1, p).nonlinear * (1.0 + 1e-12));
  }
}

TEST_CASE("tail family") {
  CHECK(tail_exponent(2.0, 3) == doctest::Approx(1.0 / 12.0));
  auto g = build_grid(3, 20.0, 801);
  const auto fam = tail_family(gaussian(g, 1.5), {1.0, 2.0, 3.0, 4.0}, 2.0);
  REQUIRE(fam.size() == 4);
  for (std::size_t k = 1; k < fam.size(); ++k) {
    CHECK(fam[k].annulus < fam[k - 1].annulus);
    CHECK(fam[k].w_norm < fam[k - 1].w_norm);
  }
}
