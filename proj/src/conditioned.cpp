#include "rwlab/conditioned.hpp"

#include <cmath>
#include <sstream>

#include "rwlab/error.hpp"

namespace rwlab {

ConditionedKernel::ConditionedKernel(const RenewalTable& table)
    : law_(table.law), V_(table.V), last_state_(table.x_max - table.law.max_up()) {
  if (last_state_ < 0) throw BudgetError("conditioned_kernel: x_max is smaller than the largest upward jump");
  if (const double defect = table.harmonicity_defect(); defect > kHarmonicityTolerance) {
    std::ostringstream msg;
    msg << "conditioned_kernel: V is not harmonic (defect " << defect << " > " << kHarmonicityTolerance << ")";
    throw TableInconsistency(msg.str());
  }
}

double ConditionedKernel::transition(std::int64_t x, std::int64_t y) const {
  if (x < 0 || x > last_state_)
    throw BudgetError("conditioned kernel: state " + std::to_string(x) + " outside [0, " +
                      std::to_string(last_state_) + "]; enlarge x_max");
  if (y < 0) return 0.0;
  const double p = law_.probability(y - x);
  if (p == 0.0) return 0.0;
  return V(y) / V(x) * p;
}

LatticeRow ConditionedKernel::row(std::int64_t x) const {
  const std::int64_t lo = std::max<std::int64_t>(0, x - law_.max_down());
  const std::int64_t hi = x + law_.max_up();
  std::vector<double> mass;
  for (auto y = lo; y <= hi; ++y) mass.push_back(transition(x, y));
  return LatticeRow(lo, std::move(mass));
}

LatticePath sample_conditioned(const ConditionedKernel& kernel, std::int64_t x, std::int64_t n, RandomState& rng) {
  if (x < 0) throw DomainError("sample_conditioned: start must be >= 0");
  if (n < 0) throw DomainError("sample_conditioned: n must be >= 0");
  const auto& law = kernel.law();
  if (n > 0 && x + (n - 1) * law.max_up() > kernel.last_state())
    throw BudgetError("sample_conditioned: reachable range " + std::to_string(x + n * law.max_up()) +
                      " exceeds the renewal table; enlarge x_max");
  LatticePath path;
  path.positions.reserve(static_cast<std::size_t>(n + 1));
  path.positions.push_back(x);
  std::int64_t z = x;
  for (std::int64_t j = 0; j < n; ++j) {
    const double u = rng.uniform();
    double cum = 0.0;
    std::int64_t next = z;
    for (const auto& m : law.support()) {
      const double p = kernel.transition(z, z + m.offset);
      if (p == 0.0) continue;
      next = z + m.offset;
      cum += p;
      if (u < cum) break;
    }
    z = next;
    path.positions.push_back(z);
  }
  return path;
}

BridgeTable bridge_table(const StepLaw& law, std::int64_t x, std::int64_t y, std::int64_t n, std::size_t cell_budget) {
  if (x < 0 || y < 0) throw DomainError("bridge_table: endpoints must be >= 0");
  if (n < 0) throw DomainError("bridge_table: n must be >= 0");
  // Backward rows of the walk are forward rows of the reversed walk from y.
  const StepLaw reversed = law.reversed();
  std::vector<LatticeRow> backward;
  backward.reserve(static_cast<std::size_t>(n + 1));
  backward.push_back(LatticeRow::point_mass(y));
  std::size_t cells = 1;
  for (std::int64_t m = 1; m <= n; ++m) {
    backward.push_back(advance(backward.back(), reversed, StateWindow::non_negative()));
    cells += backward.back().size();
    if (cells > cell_budget)
      throw BudgetError("bridge_table: table exceeds the budget of " + std::to_string(cell_budget) + " cells");
  }
  BridgeTable t{law, x, y, n, {}, 0.0};
  t.h.assign(backward.rbegin(), backward.rend());
  t.normalizer = t.h.front().at(x);
  if (!(t.normalizer > 0.0))
    throw UnreachableError("bridge_table: P_" + std::to_string(x) + "[S^_" + std::to_string(n) + " = " +
                           std::to_string(y) + "] = 0 (try a reachable endpoint)");
  return t;
}

LatticePath sample_bridge(const BridgeTable& table, RandomState& rng) {
  const auto& law = table.law;
  LatticePath path;
  path.positions.reserve(static_cast<std::size_t>(table.n + 1));
  path.positions.push_back(table.x);
  std::int64_t z = table.x;
  for (std::int64_t j = 0; j < table.n; ++j) {
    const LatticeRow& next_row = table.h[static_cast<std::size_t>(j + 1)];
    auto weight = [&](const StepMass& m) {
      const auto w = z + m.offset;
      return w < 0 ? 0.0 : m.probability * next_row.at(w);
    };
    double total = 0.0;
    for (const auto& m : law.support()) total += weight(m);
    const double u = rng.uniform() * total;
    double cum = 0.0;
    std::int64_t chosen = z;
    for (const auto& m : law.support()) {
      const double wgt = weight(m);
      if (wgt <= 0.0) continue;
      chosen = z + m.offset;
      cum += wgt;
      if (u < cum) break;
    }
    z = chosen;
    path.positions.push_back(z);
  }
  return path;
}

LatticeRow bridge_marginal_exact(const BridgeTable& table, std::int64_t m) {
  if (m < 0 || m > table.n) throw DomainError("bridge_marginal_exact: m must lie in [0, n]");
  const LatticeRow forward = killed_row(table.law, table.x, m);
  const LatticeRow& backward = table.h[static_cast<std::size_t>(m)];
  std::vector<double> mass;
  for (auto z = forward.lo(); z <= forward.hi(); ++z) mass.push_back(forward.at(z) * backward.at(z) / table.normalizer);
  LatticeRow out(forward.lo(), std::move(mass));
  out.trim();
  return out;
}

LatticeRow bridge_marginal_exact(const StepLaw& law, std::int64_t x, std::int64_t y, std::int64_t n, std::int64_t m) {
  if (x < 0 || y < 0) throw DomainError("bridge_marginal_exact: endpoints must be >= 0");
  if (m < 0 || m > n) throw DomainError("bridge_marginal_exact: m must lie in [0, n]");
  const LatticeRow forward = killed_row(law, x, m);
  const LatticeRow backward = killed_row(law.reversed(), y, n - m);
  const double normalizer = killed_row(law, x, n).at(y);
  if (!(normalizer > 0.0)) throw UnreachableError("bridge_marginal_exact: endpoint unreachable");
  std::vector<double> mass;
  for (auto z = forward.lo(); z <= forward.hi(); ++z) mass.push_back(forward.at(z) * backward.at(z) / normalizer);
  LatticeRow out(forward.lo(), std::move(mass));
  out.trim();
  return out;
}

std::vector<double> rescale_path(const LatticePath& path, std::int64_t n, double a_n, std::span<const double> grid) {
  if (n < 0 || static_cast<std::int64_t>(path.length()) < n)
    throw DomainError("rescale_path: path shorter than n = " + std::to_string(n));
  if (!(a_n > 0.0)) throw DomainError("rescale_path: a_n must be positive");
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("rescale_path: grid time outside [0, 1]");
    const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
    out.push_back(static_cast<double>(path.positions[k]) / a_n);
  }
  return out;
}

}  // namespace rwlab
