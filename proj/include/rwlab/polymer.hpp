#pragma once

#include <cstdint>
#include <vector>

#include "rwlab/lattice.hpp"
#include "rwlab/random.hpp"
#include "rwlab/steplaw.hpp"

namespace rwlab {

struct VerificationReport;

// Stripe pinning model: the walk from S_0 = 0 on Z, reweighted by
// exp(eps * #{1 <= i <= N : S_i in [0, a]}) and constrained to S_N in [0, a].
struct PolymerParams {
  std::int64_t N = 1;
  std::int64_t a = 0;
  double eps = 0.0;
  std::int64_t window = 1;  // states outside [-window, window] are dropped
};

// Default window a + 8 * ceil(a_N).
PolymerParams make_polymer_params(const StepLaw& law, std::int64_t N, std::int64_t a, double eps);

// Largest relative bias of Z tolerated from the window truncation.
inline constexpr double kPolymerBiasTolerance = 1e-9;

struct PartitionFunction {
  double Z = 0.0;
  // Upper bound on the weighted mass lost at the window edges, relative to Z.
  double relative_bias_bound = 0.0;
};

// Throws ConfigError on invalid params and BudgetError when the bias bound
// exceeds kPolymerBiasTolerance.
PartitionFunction partition_function_detail(const StepLaw& law, const PolymerParams& p);
double partition_function(const StepLaw& law, const PolymerParams& p);

// |Z(2 window) / Z(window) - 1|.
double window_doubling_change(const StepLaw& law, const PolymerParams& p);

// Forward and backward weighted tables.
//   forward[i](z)  = E[prod_{j <= i} w(S_j); S_i = z]
//   backward[i](z) = E_z[prod_{i < j <= N} w(S_j) 1_{S_N in [0, a]}]
// with w(z) = e^eps on the stripe and 1 elsewhere, so Z = backward[0](0).
struct PolymerTable {
  StepLaw law;
  PolymerParams params;
  std::vector<LatticeRow> forward;
  std::vector<LatticeRow> backward;
  double Z = 0.0;
};

// Throws UnreachableError when Z = 0.
PolymerTable polymer_table(const StepLaw& law, const PolymerParams& p);

// Exact sample from the polymer measure.
LatticePath sample_polymer(const PolymerTable& table, RandomState& rng);
LatticePath sample_polymer(const StepLaw& law, const PolymerParams& p, RandomState& rng);

// Law of S_i under the polymer measure.
LatticeRow polymer_marginal(const PolymerTable& table, std::int64_t i);

// E[#contacts] under the polymer measure, from the forward/backward tables.
double expected_contacts(const PolymerTable& table);

// d/d eps log Z by a centred difference with the given step.
double log_partition_derivative(const StepLaw& law, const PolymerParams& p, double step = 1e-4);

// Number of i in [1, N] with path[i] in [0, a].
std::int64_t count_contacts(const LatticePath& path, std::int64_t a);

// Exhaustive check (N <= 8) that, given the contact times and positions, the
// excursions between consecutive contacts are independent and each is the
// walk conditioned to avoid the stripe at its interior times.
VerificationReport decoupling_check(const StepLaw& law, const PolymerParams& p);

}  // namespace rwlab
