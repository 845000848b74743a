#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwlab/ladder.hpp"
#include "rwlab/lattice.hpp"
#include "rwlab/random.hpp"
#include "rwlab/steplaw.hpp"

namespace rwlab {

// Transition kernel of the walk conditioned to stay non-negative,
//   p*(x, y) = V(y) / V(x) * P[X = y - x],  y >= 0,
// defined for x in [0, x_max - max_up] so that every target y has a V value.
class ConditionedKernel {
 public:
  // Throws TableInconsistency when V is not harmonic within 1e-9.
  explicit ConditionedKernel(const RenewalTable& table);

  const StepLaw& law() const noexcept { return law_; }
  // Largest state whose row is fully covered by the V table.
  std::int64_t last_state() const noexcept { return last_state_; }
  double V(std::int64_t x) const { return V_.at(static_cast<std::size_t>(x)); }

  double transition(std::int64_t x, std::int64_t y) const;
  // Row x as a distribution over y.
  LatticeRow row(std::int64_t x) const;

 private:
  StepLaw law_;
  std::vector<double> V_;
  std::int64_t last_state_ = 0;
};

// Path of length n under P*_x. Throws BudgetError when x + n * max_up leaves
// the kernel's range.
LatticePath sample_conditioned(const ConditionedKernel& kernel, std::int64_t x, std::int64_t n, RandomState& rng);

// Backward table of the bridge from x to y in n steps.
//
// The h-transform factors V(y)/V(x) cancel once the endpoint is fixed, so the
// conditioned bridge P_n^{*,x,y} is exactly the bridge of the killed walk:
//   h_j(z) = P_z[S^_{n-j} = y],  h_n = 1_{y},
//   h_j(z) = sum_{w >= 0} P[X = w - z] h_{j+1}(w).
// No renewal function is needed to sample it.
struct BridgeTable {
  StepLaw law;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t n = 0;
  std::vector<LatticeRow> h;  // h[j], j = 0..n
  double normalizer = 0.0;    // h_0(x) = P_x[S^_n = y]
};

inline constexpr std::size_t kDefaultBridgeCellBudget = std::size_t{1} << 25;

// Throws UnreachableError when P_x[S^_n = y] = 0 and BudgetError when the
// table would exceed `cell_budget` stored entries.
BridgeTable bridge_table(const StepLaw& law, std::int64_t x, std::int64_t y, std::int64_t n,
                         std::size_t cell_budget = kDefaultBridgeCellBudget);

// Exact sample from the bridge: from z at time j, move to w >= 0 with
// probability P[X = w - z] h_{j+1}(w) / h_j(z).
LatticePath sample_bridge(const BridgeTable& table, RandomState& rng);

// P_n^{*,x,y}[S_m = z] = P_x[S^_m = z] P_z[S^_{n-m} = y] / P_x[S^_n = y].
LatticeRow bridge_marginal_exact(const StepLaw& law, std::int64_t x, std::int64_t y, std::int64_t n, std::int64_t m);
// Same marginal read off a prebuilt table (forward rows recomputed from x).
LatticeRow bridge_marginal_exact(const BridgeTable& table, std::int64_t m);

// Cadlag evaluation of the rescaled path: position[floor(n t)] / a_n.
std::vector<double> rescale_path(const LatticePath& path, std::int64_t n, double a_n, std::span<const double> grid);

}  // namespace rwlab
