#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qnls/fiber.hpp"

namespace qnls {

/// Integrability of the terms entering the Pohozaev identity, with the Hoelder and Hardy
/// steps that bound the mixed terms. Hardy constant C = 2 / (N - 2).
struct CondPoho {
  double i1 = 0.0;       ///< int |grad u|^2 + V u^2 + u^2 |grad u|^2 + |u|^{p+1}
  double i2 = 0.0;       ///< int |u| |u'| / (1 + r)
  double i3 = 0.0;       ///< int |u|^3 |u'| / (1 + r)
  double holder2 = 0.0;  ///< (int u^2 / r^2)^{1/2} (int u'^2)^{1/2}
  double hardy2 = 0.0;   ///< C int u'^2
  double holder3 = 0.0;  ///< (int u^4 / r^2)^{1/2} (int u^2 u'^2)^{1/2}
  double hardy3 = 0.0;   ///< C/2 int |(u^2)'|^2
  double hardy_constant = 0.0;
  bool finite = false;
};

/// Mixed terms use node quadrature with the three-point u'.
CondPoho condpoho_check(const Field& u, const PotentialModel& V, double p);

struct LinfBound {
  double value = 0.0;
  double r = 0.0;
};
LinfBound linf_bound(const Field& u);

struct DecayFit {
  double rate = 0.0;       ///< lambda in u ~ C e^{-lambda r}
  double amplitude = 0.0;  ///< C
  double r_lo = 0.0;
  double r_hi = 0.0;
  double fit_residual = 0.0;  ///< RMS deviation of log u from the fitted line
};

/// Least squares of log u against r on [lo, hi] * r_max.
/// Throws std::domain_error if u is not positive on the window.
DecayFit decay_fit(const Field& u, std::pair<double, double> window_fraction = {0.5, 0.8});

/// eta_R(r) = 1 for r <= R, 0 for r >= 2R, quintic smoothstep between; |eta_R'| <= 15 / (8R).
double split_eta(double r, double R);

struct SplitPair {
  Field v;
  Field w;
  double R = 0.0;
  std::string cutoff;
};

/// v = eta_R u and w = u - v, rounded so that v + w == u in floating point.
SplitPair split_cutoff(const Field& u, double R);

/// int over R <= r <= 2R of |grad u|^2 + u^2 + u^2 |grad u|^2 + |u|^{p+1}.
double annulus_energy(const Field& u, double R, double p);

struct SplittingError {
  std::vector<double> t_values;
  std::vector<double> errors;  ///< |f_u(t) - f_v(t) - f_w(t)|
  double eps_R = 0.0;
  double C = 0.0;              ///< max_t error / (eps_R (t^N + t^{N+p+1}))
  double C_min = 0.0;          ///< min_t of the same ratio
};

SplittingError splitting_energy_error(const Field& u, double R, const PotentialModel& V, double p,
                                      const std::vector<double>& t_values);

/// sup over centres y on a ray of int_{B_y(R)} |u|^{p+1}; the ball integral of the radial
/// integrand uses, per radius, the fraction of the sphere inside the ball (Simpson in the angle).
double vanishing_sup(const Field& u, double R, std::size_t centers, double p);

/// Fraction of the sphere |x| = r lying in the ball B_y(R), |y| = y.
double sphere_fraction_in_ball(int dimension, double r, double y, double R);

/// (p - 1) / (2 (N + p + 1)).
double tail_exponent(double p, int dimension);

struct TailPoint {
  double R = 0.0;
  double annulus = 0.0;
  double w_norm = 0.0;  ///< d_X(w, 0)
};

/// split_cutoff at each R with the annulus energy and the size of the outer part.
std::vector<TailPoint> tail_family(const Field& u, const std::vector<double>& radii, double p);

}  // namespace qnls
