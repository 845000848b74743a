#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "rwlab/error.hpp"
#include "rwlab/excursion.hpp"

using namespace rwlab;
using namespace rwlab::excursion;

namespace {

// Closed form of P[e_t <= x]: e_t is sqrt(t (1 - t)) times a chi variable with
// three degrees of freedom.
double maxwell_cdf(double t, double x) {
  const double s = std::sqrt(t * (1.0 - t));
  const double z = x / s;
  return std::erf(z / std::sqrt(2.0)) - std::sqrt(2.0 / std::numbers::pi) * z * std::exp(-0.5 * z * z);
}

double r_naive(double u, double v) {
  return std::sqrt(2.0 / std::numbers::pi) * std::sinh(u * v) * std::exp(-0.5 * (u * u + v * v));
}

}  // namespace

TEST(Excursion, ReferenceValues) {
  // 0.34495131388824463 to 17 digits (mpmath at 30 digits).
  EXPECT_NEAR(r_kernel(1.0, 1.0), 0.3449513138882446, 1e-15);
  EXPECT_NEAR(r_kernel(1.0, 1.0), 0.344958, 1e-5);
  EXPECT_NEAR(r_kernel(1.0, 1.0), r_naive(1.0, 1.0), 1e-15);
  EXPECT_NEAR(l_density(1.0, 1.0), 0.241971, 1e-6);
  EXPECT_DOUBLE_EQ(r_kernel(2.0, 0.0), 0.0);
  EXPECT_NEAR(marginal_cdf(0.5, 1.0 / std::sqrt(2.0)), 0.4275932955291202, 1e-12);
}

TEST(Excursion, StableForLargeArguments) {
  const double r = r_kernel(30.0, 30.0);
  EXPECT_TRUE(std::isfinite(r));
  EXPECT_NEAR(r, std::sqrt(2.0 / std::numbers::pi) / 2.0, 1e-15);
  for (double u : {0.5, 2.0, 5.0})
    for (double v : {0.1, 1.0, 4.0}) EXPECT_NEAR(r_kernel(u, v), r_naive(u, v), 1e-14);
}

TEST(Excursion, MarginalMatchesClosedForm) {
  for (double t : {0.1, 0.25, 0.5, 0.9})
    for (double x : {0.05, 0.2, 0.5, 1.0, 2.0}) EXPECT_NEAR(marginal_cdf(t, x), maxwell_cdf(t, x), 1e-10);
  EXPECT_NEAR(marginal_cdf(0.5, 50.0), 1.0, 1e-9);
}

TEST(Excursion, Normalization) {
  const double one[] = {0.3};
  const double two[] = {0.25, 0.6};
  EXPECT_NEAR(fdd_total_mass(one), 1.0, 1e-6);
  EXPECT_NEAR(fdd_total_mass(two), 1.0, 1e-6);
}

TEST(Excursion, ChapmanKolmogorov) {
  using boost::math::quadrature::gauss_kronrod;
  for (double x : {0.3, 1.0})
    for (double y : {0.2, 1.5}) {
      const double s = 0.3, t = 0.45;
      const double lhs = gauss_kronrod<double, 61>::integrate(
          [&](double z) { return q_density(s, x, z) * q_density(t, z, y); }, 0.0, 15.0, 15, 1e-13);
      EXPECT_NEAR(lhs, q_density(s + t, x, y), 1e-7);
    }
}

TEST(Excursion, DensityMaximizer) {
  const auto [arg, val] = boost::math::tools::brent_find_minima(
      [](double x) { return -marginal_density(0.5, x); }, 0.1, 2.0, 50);
  (void)val;
  EXPECT_NEAR(arg, 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Excursion, Preconditions) {
  EXPECT_THROW(q_density(0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(l_density(-1.0, 1.0), DomainError);
  EXPECT_THROW(marginal_cdf(1.0, 0.5), DomainError);
  const double t[] = {0.5, 0.4};
  const double x[] = {1.0, 1.0};
  EXPECT_THROW(fdd_density(t, x), DomainError);
}
