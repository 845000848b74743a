#include "rwlab/lattice.hpp"

#include <algorithm>
#include <numeric>

#include "rwlab/error.hpp"
#include "rwlab/steplaw.hpp"

namespace rwlab {

LatticeRow::LatticeRow(std::int64_t lo, std::vector<double> mass) : lo_(lo), mass_(std::move(mass)) {}

LatticeRow LatticeRow::point_mass(std::int64_t z, double weight) { return LatticeRow(z, {weight}); }

double LatticeRow::at(std::int64_t z) const noexcept {
  if (z < lo_ || z > hi()) return 0.0;
  return mass_[static_cast<std::size_t>(z - lo_)];
}

double LatticeRow::total() const noexcept { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

void LatticeRow::scale_range(std::int64_t from, std::int64_t to, double factor) {
  const auto a = std::max(from, lo_);
  const auto b = std::min(to, hi());
  for (auto z = a; z <= b; ++z) mass_[static_cast<std::size_t>(z - lo_)] *= factor;
}

void LatticeRow::scale(double factor) {
  for (auto& m : mass_) m *= factor;
}

void LatticeRow::trim() {
  for (auto& m : mass_)
    if (m < kUnderflowFloor) m = 0.0;
  auto first = std::find_if(mass_.begin(), mass_.end(), [](double m) { return m != 0.0; });
  if (first == mass_.end()) {
    mass_.clear();
    return;
  }
  auto last = std::find_if(mass_.rbegin(), mass_.rend(), [](double m) { return m != 0.0; }).base();
  lo_ += std::distance(mass_.begin(), first);
  mass_ = std::vector<double>(first, last);
}

LatticeRow advance(const LatticeRow& row, const StepLaw& law, const StateWindow& keep) {
  if (row.empty()) return {};
  std::int64_t lo = row.lo() - law.max_down();
  std::int64_t hi = row.hi() + law.max_up();
  if (keep.lo) lo = std::max(lo, *keep.lo);
  if (keep.hi) hi = std::min(hi, *keep.hi);
  if (hi < lo) return {};

  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const auto in = row.masses();
  const std::int64_t in_lo = row.lo();
  const std::int64_t in_hi = row.hi();
  for (const auto& [offset, p] : law.support()) {
    // out[z] += p * in[z - offset] for z in [lo, hi] with z - offset in [in_lo, in_hi]
    const std::int64_t z0 = std::max(lo, in_lo + offset);
    const std::int64_t z1 = std::min(hi, in_hi + offset);
    if (z1 < z0) continue;
    double* dst = out.data() + (z0 - lo);
    const double* src = in.data() + (z0 - offset - in_lo);
    const auto count = z1 - z0 + 1;
    for (std::int64_t i = 0; i < count; ++i) dst[i] += p * src[i];
  }
  LatticeRow result(lo, std::move(out));
  result.trim();
  return result;
}

}  // namespace rwlab
