#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rwlab/lattice.hpp"
#include "rwlab/steplaw.hpp"

namespace rwlab {

// Rows j = 0..horizon of P_start[S^_j = z] for the walk killed on its first
// entrance into (-inf, 0). Row sums are survival probabilities.
struct KilledDistribution {
  StepLaw law;
  std::int64_t start = 0;
  std::int64_t horizon = 0;
  std::vector<LatticeRow> rows;

  const LatticeRow& row(std::int64_t j) const { return rows.at(static_cast<std::size_t>(j)); }
  double at(std::int64_t j, std::int64_t z) const { return row(j).at(z); }
  double survival(std::int64_t j) const { return row(j).total(); }
};

KilledDistribution killed_pmf(const StepLaw& law, std::int64_t start, std::int64_t horizon);

// Last row of killed_pmf without storing the intermediate rows.
LatticeRow killed_row(const StepLaw& law, std::int64_t start, std::int64_t n);

// P_start[tau_(-inf,0) > n]. For start = 0 this is P[T_1^- > n].
double survival(const StepLaw& law, std::int64_t start, std::int64_t n);
// P_start[tau > j] for j = 0..n_max in one pass.
std::vector<double> survival_curve(const StepLaw& law, std::int64_t start, std::int64_t n_max);

// P[T_1^+ > j] = P[S_1 < 0, ..., S_j < 0] for j = 0..n_max (weak ascending epoch).
std::vector<double> weak_ascending_tail(const StepLaw& law, std::int64_t n_max);

// v(n, x) = P[S_n = -x, S_j > -x for j < n]: n is a strict descending ladder
// epoch with height x. Zero for unreachable (n, x).
double v_mass(const StepLaw& law, std::int64_t n, std::int64_t x);

// v(j, k) for j = 0..n_max (row index) and k = 0..x_max (column), v(0, 0) = 1.
std::vector<std::vector<double>> v_mass_table(const StepLaw& law, std::int64_t n_max, std::int64_t x_max);

// u(n, x) = P[S_1 >= 0, ..., S_n >= 0, S_n = x], with u(0, 0) = 1.
double u_mass(const StepLaw& law, std::int64_t n, std::int64_t x);

// First-ladder laws from the exact killed dynamic programme, truncated in time.
struct FirstLadderLaws {
  std::int64_t n_max = 0;
  // joint_minus[n][h] = P[T_1^- = n, H_1^- = h], n in [0, n_max], h in [0, max_down].
  std::vector<std::vector<double>> joint_minus;
  // joint_plus[n][h] = P[T_1^+ = n, H_1^+ = h], n in [0, n_max], h in [0, max_up].
  std::vector<std::vector<double>> joint_plus;
  std::vector<double> t_minus;  // P[T_1^- = n]
  std::vector<double> t_plus;   // P[T_1^+ = n]
  double tail_minus = 0.0;      // P[T_1^- > n_max]
  double tail_plus = 0.0;       // P[T_1^+ > n_max]
  double truncation_error = 0.0;

  // P[H_1^- = h, T_1^- <= n_max]
  double h_minus_mass(std::int64_t h) const;
};

FirstLadderLaws first_ladder_laws(const StepLaw& law, std::int64_t n_max);

// Exact ladder-height laws from the Wiener-Hopf factorisation of the step
// generating function.
//
// With f(z) = sum_k P[X = k] z^k, the polynomial z^d (1 - f(z)) (d = max_down)
// has a double root at 1, d - 1 further roots inside the unit disc and u - 1
// outside (u = max_up). The strict descending factor is
//   z^d (1 - E[z^{-H_1^-}]) = (z - 1) prod_{|r| < 1} (z - r)
// and the weak ascending factor is
//   1 - E[z^{H_1^+}] = -P[X = u] (z - 1) prod_{|r| > 1} (z - r).
// No truncation in time is involved, so V and U built from these laws are
// exact up to rounding.
struct LadderHeightLaws {
  std::vector<double> h_minus;  // index h in [0, max_down], h_minus[0] = 0
  std::vector<double> h_plus;   // index h in [0, max_up]; h_plus[0] is the tie mass
  double factorization_residual = 0.0;  // max coefficient error of (1 - chi+)(1 - chi-) vs 1 - f
};

LadderHeightLaws ladder_height_laws(const StepLaw& law);

// V(x) = sum_k P(H_k^- <= x) for x in [0, x_max], by the renewal recursion.
std::vector<double> renewal_V(const StepLaw& law, std::int64_t x_max);
// U(x) = sum_k P(H_k^+ <= x), weak ladder heights (ties at 0 included).
std::vector<double> renewal_U(const StepLaw& law, std::int64_t x_max);

// V from first-ladder masses truncated at n_max, together with the bound on
// the missing mass. Slow (n^{-1/2}) but independent of the root finding.
struct TruncatedRenewal {
  std::vector<double> values;
  double missing_mass = 0.0;
};
TruncatedRenewal renewal_V_truncated(const StepLaw& law, std::int64_t x_max, std::int64_t n_max);
// Partial sums U_N(x) = sum_{n <= N} sum_{y <= x} u(n, y); converges to U(x) from below.
std::vector<double> renewal_U_partial(const StepLaw& law, std::int64_t x_max, std::int64_t n_max);

struct RenewalTable {
  StepLaw law;
  std::int64_t x_max = 0;
  std::int64_t n_max = 0;
  std::vector<double> V;
  std::vector<double> U;
  std::vector<double> h_minus_pmf;   // law of H_1^-, index = height
  std::vector<double> h_plus_pmf;    // law of H_1^+, index = height
  std::vector<double> t_minus_tail;  // P[T_1^- > n], n = 0..n_max
  std::vector<double> t_plus_tail;   // P[T_1^+ > n], n = 0..n_max
  double truncation_error = 0.0;     // 1 - total height mass, plus factorisation residual

  // max over x in [0, x_max - max_up] of |sum_y V(y) P[X = y - x] - V(x)|.
  double harmonicity_defect() const;
};

inline constexpr double kHarmonicityTolerance = 1e-9;
inline constexpr double kRenewalTruncationBudget = 1e-10;

RenewalTable build_renewal_table(const StepLaw& law, std::int64_t x_max = 256, std::int64_t n_max = 1 << 14);

// Process-wide cache of immutable tables keyed by (law, x_max, n_max).
std::shared_ptr<const RenewalTable> cached_renewal_table(const StepLaw& law, std::int64_t x_max, std::int64_t n_max);

// Duality: u(n, x) from the killed walk (lhs) and from the renewal
// convolution of the weak ascending ladder law (T_1^+, H_1^+) (rhs).
std::pair<double, double> duality_check(const StepLaw& law, std::int64_t n, std::int64_t x);

// The rhs of duality_check for all n <= n_max, x <= x_max at once.
std::vector<std::vector<double>> ladder_renewal_mass(const StepLaw& law, std::int64_t n_max, std::int64_t x_max);

}  // namespace rwlab
