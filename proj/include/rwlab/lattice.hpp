#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rwlab {

class StepLaw;

// Non-negative mass on the consecutive integers [lo, lo + size).
//
// Used for every exact distribution in the library: unconditioned walk
// marginals, killed-walk rows, backward bridge tables and polymer weights.
class LatticeRow {
 public:
  LatticeRow() = default;
  LatticeRow(std::int64_t lo, std::vector<double> mass);

  static LatticeRow point_mass(std::int64_t z, double weight = 1.0);

  bool empty() const noexcept { return mass_.empty(); }
  std::int64_t lo() const noexcept { return lo_; }
  // Inclusive upper end; lo() - 1 when empty.
  std::int64_t hi() const noexcept { return lo_ + static_cast<std::int64_t>(mass_.size()) - 1; }
  std::size_t size() const noexcept { return mass_.size(); }

  double at(std::int64_t z) const noexcept;
  double total() const noexcept;
  std::span<const double> masses() const noexcept { return mass_; }
  std::vector<double>& mutable_masses() noexcept { return mass_; }

  // Multiply every entry with z in [from, to] by `factor`.
  void scale_range(std::int64_t from, std::int64_t to, double factor);
  void scale(double factor);
  // Zero out values below the underflow floor and drop zero ends.
  void trim();

 private:
  std::int64_t lo_ = 0;
  std::vector<double> mass_;
};

// Inclusive state window; an absent bound means unbounded on that side.
struct StateWindow {
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;

  static StateWindow non_negative() { return {0, std::nullopt}; }
  static StateWindow at_least(std::int64_t z) { return {z, std::nullopt}; }
  static StateWindow at_most(std::int64_t z) { return {std::nullopt, z}; }
  static StateWindow between(std::int64_t a, std::int64_t b) { return {a, b}; }
  static StateWindow all() { return {}; }
};

// Entries smaller than this are flushed to zero after each step; they would
// otherwise turn into subnormals and slow the convolutions down by orders of
// magnitude. The mass discarded per step is below 1e-290.
inline constexpr double kUnderflowFloor = 1e-300;

// One step of the walk: out(z) = sum_k P[X = k] row(z - k), restricted to
// the window (mass leaving the window is dropped).
LatticeRow advance(const LatticeRow& row, const StepLaw& law, const StateWindow& keep = {});

}  // namespace rwlab
