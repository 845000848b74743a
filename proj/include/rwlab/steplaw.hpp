#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rwlab/lattice.hpp"

namespace rwlab {

struct StepMass {
  std::int64_t offset = 0;
  double probability = 0.0;
};

// Finite-support, mean-zero, aperiodic integer step distribution.
//
// Construction validates every invariant (unit mass, zero mean, aperiodicity
// via the gcd of return times up to 64 steps) and throws ConfigError naming
// the violated one. Instances are immutable.
class StepLaw {
 public:
  static constexpr double kMassTolerance = 1e-12;
  static constexpr int kAperiodicityHorizon = 64;

  StepLaw(std::string name, std::vector<StepMass> masses);

  const std::string& name() const noexcept { return name_; }
  std::span<const StepMass> support() const noexcept { return masses_; }

  // P[X = offset]; zero off the support.
  double probability(std::int64_t offset) const noexcept;

  double sigma2() const noexcept { return sigma2_; }
  double sigma() const noexcept;
  // Largest upward jump (>= 0) and magnitude of the largest downward jump (>= 0).
  std::int64_t max_up() const noexcept { return max_up_; }
  std::int64_t max_down() const noexcept { return max_down_; }

  // Law of -X: the step law of the time-reversed walk.
  StepLaw reversed() const;

  friend bool operator==(const StepLaw& a, const StepLaw& b) noexcept;

 private:
  struct Unchecked {};
  StepLaw(Unchecked, std::string name, std::vector<StepMass> masses);

  std::string name_;
  std::vector<StepMass> masses_;  // sorted by offset, strictly positive masses
  double sigma2_ = 0.0;
  std::int64_t max_up_ = 0;
  std::int64_t max_down_ = 0;
};

enum class BuiltinLaw { lazy_srw, three_point };

StepLaw make_builtin_law(BuiltinLaw which);
// Accepts "lazy_srw" and "three_point"; anything else is a ConfigError.
StepLaw make_builtin_law(std::string_view name);

// Plain-text law format: one "offset probability" pair per line, probability
// either decimal or "p/q"; '#' starts a comment.
StepLaw parse_step_law(std::istream& in, std::string name);
StepLaw load_step_law(const std::string& path);
// Builtin name, or a path to a law file.
StepLaw resolve_step_law(const std::string& spec);

// gcd{ n <= horizon : P[S_n = 0] > 0 }, 0 if the walk never returns.
std::int64_t return_time_gcd(const StepLaw& law, int horizon = StepLaw::kAperiodicityHorizon);

// Path of the walk: positions[0] = start, consecutive differences in the support.
struct LatticePath {
  std::vector<std::int64_t> positions;

  std::int64_t start() const { return positions.front(); }
  std::size_t length() const { return positions.empty() ? 0 : positions.size() - 1; }
  std::vector<std::int64_t> steps() const;
};

// Throws DomainError when a step is not in the support of `law`.
void validate_path(const LatticePath& path, const StepLaw& law);

// Exact law of S_n under P_0 by n-fold convolution.
LatticeRow walk_pmf(const StepLaw& law, std::int64_t n);

// a_n = sigma * sqrt(n).
double norming(const StepLaw& law, std::int64_t n);

double std_normal_pdf(double x) noexcept;

// a_n P[S_n = y] / phi(y / a_n), the local limit theorem ratio.
double llt_ratio(const StepLaw& law, std::int64_t n, std::int64_t y);
// Same ratio with a precomputed pmf of S_n.
double llt_ratio(const StepLaw& law, const LatticeRow& pmf_n, std::int64_t n, std::int64_t y);

}  // namespace rwlab
