#pragma once

#include <span>

namespace rwlab::excursion {

// Reference densities of killed Brownian motion and of the normalized
// Brownian excursion. All functions are pure.

struct QuadratureSettings {
  double abs_tolerance = 1e-9;
  // Improper integrals stop at cutoff_sd * sqrt(t (1 - t)); the neglected
  // Gaussian tail is below 1e-28 at the default.
  double cutoff_sd = 12.0;
};

// r(u, v) = sqrt(2/pi) sinh(uv) exp(-(u^2 + v^2)/2), evaluated as
// sqrt(2/pi)/2 * exp(-(u - v)^2/2) * (1 - exp(-2uv)) so it never overflows.
double r_kernel(double u, double v);

// Transition density of Brownian motion killed at 0: q_t(x, y) = r(x/sqrt t, y/sqrt t)/sqrt t.
double q_density(double t, double x, double y);

// Entrance density l_t(y) = r0(y/sqrt t)/t with r0(v) = v exp(-v^2/2)/sqrt(2 pi).
double l_density(double t, double y);

// Joint density of (e_{t_1}, ..., e_{t_k}) for the normalized excursion:
// 2 sqrt(2 pi) l_{t_1}(x_1) q_{t_2 - t_1}(x_1, x_2) ... l_{1 - t_k}(x_k).
double fdd_density(std::span<const double> times, std::span<const double> values);

// Density of e_t alone.
double marginal_density(double t, double x);

// P[e_t <= x] by adaptive Gauss-Kronrod quadrature. Throws NumericError if the
// error estimate exceeds the tolerance.
double marginal_cdf(double t, double x, const QuadratureSettings& settings = {});

// Integral of fdd_density over (R_+)^k for k <= 3 by nested quadrature.
double fdd_total_mass(std::span<const double> times, const QuadratureSettings& settings = {});

// Mass of e_t on [lo, hi].
double marginal_mass(double t, double lo, double hi, const QuadratureSettings& settings = {});

}  // namespace rwlab::excursion
