#include "rwlab/excursion.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rwlab/error.hpp"

namespace rwlab::excursion {

namespace {

void require_positive_time(double t, const char* op) {
  if (!(t > 0.0)) {
    std::ostringstream msg;
    msg << op << ": time must be > 0, got " << t;
    throw DomainError(msg.str());
  }
}

void require_interior_time(double t, const char* op) {
  if (!(t > 0.0 && t < 1.0)) {
    std::ostringstream msg;
    msg << op << ": time must lie in (0, 1), got " << t;
    throw DomainError(msg.str());
  }
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSettings& settings, const char* op) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13, &error);
  if (error > settings.abs_tolerance) {
    std::ostringstream msg;
    msg << op << ": quadrature reached only " << error << " (requested " << settings.abs_tolerance << ")";
    throw NumericError(msg.str());
  }
  return value;
}

double cutoff(double t, const QuadratureSettings& settings) { return settings.cutoff_sd * std::sqrt(t * (1.0 - t)); }

}  // namespace

double r_kernel(double u, double v) {
  if (u < 0.0 || v < 0.0) throw DomainError("r_kernel: arguments must be >= 0");
  const double d = u - v;
  return std::sqrt(2.0 / std::numbers::pi) * 0.5 * std::exp(-0.5 * d * d) * -std::expm1(-2.0 * u * v);
}

double q_density(double t, double x, double y) {
  require_positive_time(t, "q_density");
  if (x < 0.0 || y < 0.0) throw DomainError("q_density: positions must be >= 0");
  const double s = std::sqrt(t);
  return r_kernel(x / s, y / s) / s;
}

double l_density(double t, double y) {
  require_positive_time(t, "l_density");
  if (y < 0.0) throw DomainError("l_density: position must be >= 0");
  const double v = y / std::sqrt(t);
  return v * std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi) / t;
}

double fdd_density(std::span<const double> times, std::span<const double> values) {
  if (times.empty() || times.size() != values.size())
    throw DomainError("fdd_density: need k >= 1 times and as many values");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_interior_time(times[i], "fdd_density");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("fdd_density: times must be strictly increasing");
    if (values[i] < 0.0) throw DomainError("fdd_density: values must be >= 0");
  }
  double density = 2.0 * std::sqrt(2.0 * std::numbers::pi) * l_density(times.front(), values.front());
  for (std::size_t i = 1; i < times.size(); ++i)
    density *= q_density(times[i] - times[i - 1], values[i - 1], values[i]);
  return density * l_density(1.0 - times.back(), values.back());
}

double marginal_density(double t, double x) {
  const double tt[] = {t};
  const double xx[] = {x};
  return fdd_density(tt, xx);
}

double marginal_mass(double t, double lo, double hi, const QuadratureSettings& settings) {
  require_interior_time(t, "marginal_mass");
  const double top = cutoff(t, settings);
  lo = std::max(lo, 0.0);
  hi = std::min(hi, top);
  if (!(hi > lo)) return 0.0;
  return integrate([t](double s) { return marginal_density(t, s); }, lo, hi, settings, "marginal_mass");
}

double marginal_cdf(double t, double x, const QuadratureSettings& settings) {
  require_interior_time(t, "marginal_cdf");
  if (x < 0.0) throw DomainError("marginal_cdf: x must be >= 0");
  return marginal_mass(t, 0.0, x, settings);
}

double fdd_total_mass(std::span<const double> times, const QuadratureSettings& settings) {
  if (times.empty() || times.size() > 3) throw DomainError("fdd_total_mass: supports 1 <= k <= 3 times");
  std::vector<double> point(times.size(), 0.0);
  std::vector<double> tops;
  for (double t : times) {
    require_interior_time(t, "fdd_total_mass");
    tops.push_back(settings.cutoff_sd * std::sqrt(t));
  }
  // Innermost coordinate first; each level integrates the one below it.
  auto level = [&](auto&& self, std::size_t i) -> double {
    return integrate(
        [&](double s) {
          point[i] = s;
          return i + 1 == times.size() ? fdd_density(times, point) : self(self, i + 1);
        },
        0.0, tops[i], settings, "fdd_total_mass");
  };
  return level(level, 0);
}

}  // namespace rwlab::excursion
