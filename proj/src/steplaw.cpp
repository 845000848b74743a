#include "rwlab/steplaw.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rwlab/error.hpp"

namespace rwlab {

namespace {

std::vector<StepMass> normalize_masses(std::vector<StepMass> masses) {
  std::sort(masses.begin(), masses.end(), [](const StepMass& a, const StepMass& b) { return a.offset < b.offset; });
  for (std::size_t i = 1; i < masses.size(); ++i) {
    if (masses[i].offset == masses[i - 1].offset)
      throw ConfigError("step law: duplicate offset " + std::to_string(masses[i].offset));
  }
  return masses;
}

}  // namespace

StepLaw::StepLaw(Unchecked, std::string name, std::vector<StepMass> masses)
    : name_(std::move(name)), masses_(normalize_masses(std::move(masses))) {
  double s2 = 0.0;
  for (const auto& m : masses_) {
    s2 += m.probability * static_cast<double>(m.offset) * static_cast<double>(m.offset);
    max_up_ = std::max(max_up_, m.offset);
    max_down_ = std::max(max_down_, -m.offset);
  }
  sigma2_ = s2;
}

StepLaw::StepLaw(std::string name, std::vector<StepMass> masses)
    : StepLaw(Unchecked{}, std::move(name), std::move(masses)) {
  if (masses_.empty()) throw ConfigError("step law '" + name_ + "': empty support");
  double total = 0.0;
  double mean = 0.0;
  for (const auto& m : masses_) {
    if (!(m.probability > 0.0) || !std::isfinite(m.probability))
      throw ConfigError("step law '" + name_ + "': probability at offset " + std::to_string(m.offset) +
                        " must be positive and finite");
    total += m.probability;
    mean += m.probability * static_cast<double>(m.offset);
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw ConfigError("step law '" + name_ + "': probabilities sum to " + std::to_string(total) + ", not 1");
  if (std::abs(mean) > kMassTolerance)
    throw ConfigError("step law '" + name_ + "': mean is " + std::to_string(mean) + ", not 0");
  std::int64_t span = 0;
  for (const auto& m : masses_) span = std::gcd(span, m.offset < 0 ? -m.offset : m.offset);
  if (span != 1)
    throw ConfigError("step law '" + name_ + "': support lies on " + std::to_string(span) +
                      "Z, the walk does not reach every integer");
  if (return_time_gcd(*this) != 1)
    throw ConfigError("step law '" + name_ + "': not aperiodic (gcd of return times up to " +
                      std::to_string(kAperiodicityHorizon) + " steps is not 1)");
}

double StepLaw::probability(std::int64_t offset) const noexcept {
  auto it = std::lower_bound(masses_.begin(), masses_.end(), offset,
                             [](const StepMass& m, std::int64_t o) { return m.offset < o; });
  return (it != masses_.end() && it->offset == offset) ? it->probability : 0.0;
}

double StepLaw::sigma() const noexcept { return std::sqrt(sigma2_); }

StepLaw StepLaw::reversed() const {
  std::vector<StepMass> flipped;
  flipped.reserve(masses_.size());
  for (const auto& m : masses_) flipped.push_back({-m.offset, m.probability});
  return StepLaw(Unchecked{}, name_ + "~", std::move(flipped));
}

bool operator==(const StepLaw& a, const StepLaw& b) noexcept {
  if (a.masses_.size() != b.masses_.size()) return false;
  for (std::size_t i = 0; i < a.masses_.size(); ++i) {
    if (a.masses_[i].offset != b.masses_[i].offset || a.masses_[i].probability != b.masses_[i].probability)
      return false;
  }
  return true;
}

StepLaw make_builtin_law(BuiltinLaw which) {
  switch (which) {
    case BuiltinLaw::lazy_srw:
      return StepLaw("lazy_srw", {{-1, 0.25}, {0, 0.5}, {1, 0.25}});
    case BuiltinLaw::three_point:
      return StepLaw("three_point", {{-2, 0.25}, {0, 0.25}, {1, 0.5}});
  }
  throw ConfigError("unknown builtin law");
}

StepLaw make_builtin_law(std::string_view name) {
  if (name == "lazy_srw") return make_builtin_law(BuiltinLaw::lazy_srw);
  if (name == "three_point") return make_builtin_law(BuiltinLaw::three_point);
  throw ConfigError("unknown builtin law '" + std::string(name) + "' (expected lazy_srw or three_point)");
}

namespace {

double parse_probability(std::string_view text, int line_no) {
  auto fail = [&] {
    return ConfigError("step law line " + std::to_string(line_no) + ": cannot parse probability '" +
                       std::string(text) + "'");
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    long long num = 0, den = 0;
    auto a = text.substr(0, slash), b = text.substr(slash + 1);
    if (std::from_chars(a.data(), a.data() + a.size(), num).ptr != a.data() + a.size()) throw fail();
    if (std::from_chars(b.data(), b.data() + b.size(), den).ptr != b.data() + b.size()) throw fail();
    if (den <= 0) throw fail();
    return static_cast<double>(num) / static_cast<double>(den);
  }
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw fail();
    return v;
  } catch (const std::logic_error&) {
    throw fail();
  }
}

}  // namespace

StepLaw parse_step_law(std::istream& in, std::string name) {
  std::vector<StepMass> masses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string offset_text, prob_text, extra;
    if (!(fields >> offset_text)) continue;
    if (!(fields >> prob_text) || (fields >> extra))
      throw ConfigError("step law line " + std::to_string(line_no) + ": expected 'offset probability'");
    long long offset = 0;
    auto res = std::from_chars(offset_text.data(), offset_text.data() + offset_text.size(), offset);
    if (res.ptr != offset_text.data() + offset_text.size())
      throw ConfigError("step law line " + std::to_string(line_no) + ": bad offset '" + offset_text + "'");
    masses.push_back({offset, parse_probability(prob_text, line_no)});
  }
  return StepLaw(std::move(name), std::move(masses));
}

StepLaw load_step_law(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open step law file '" + path + "'");
  return parse_step_law(in, path);
}

StepLaw resolve_step_law(const std::string& spec) {
  if (spec == "lazy_srw" || spec == "three_point") return make_builtin_law(spec);
  std::ifstream probe(spec);
  if (!probe) throw ConfigError("'" + spec + "' is neither a builtin law nor a readable law file");
  return load_step_law(spec);
}

std::int64_t return_time_gcd(const StepLaw& law, int horizon) {
  std::int64_t g = 0;
  LatticeRow row = LatticeRow::point_mass(0);
  for (int n = 1; n <= horizon; ++n) {
    row = advance(row, law);
    if (row.at(0) > 0.0) g = std::gcd(g, static_cast<std::int64_t>(n));
    if (g == 1) break;
  }
  return g;
}

std::vector<std::int64_t> LatticePath::steps() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < positions.size(); ++i) out.push_back(positions[i] - positions[i - 1]);
  return out;
}

void validate_path(const LatticePath& path, const StepLaw& law) {
  if (path.positions.empty()) throw DomainError("lattice path has no start position");
  for (std::size_t i = 1; i < path.positions.size(); ++i) {
    const auto step = path.positions[i] - path.positions[i - 1];
    if (law.probability(step) <= 0.0)
      throw DomainError("lattice path step " + std::to_string(i) + " (" + std::to_string(step) +
                        ") is not in the support of '" + law.name() + "'");
  }
}

LatticeRow walk_pmf(const StepLaw& law, std::int64_t n) {
  if (n < 0) throw DomainError("walk_pmf: n must be >= 0, got " + std::to_string(n));
  LatticeRow row = LatticeRow::point_mass(0);
  for (std::int64_t j = 0; j < n; ++j) row = advance(row, law);
  return row;
}

double norming(const StepLaw& law, std::int64_t n) {
  if (n < 1) throw DomainError("norming: n must be >= 1, got " + std::to_string(n));
  if (law.sigma2() <= 0.0) throw DomainError("norming: degenerate law '" + law.name() + "' has zero variance");
  return law.sigma() * std::sqrt(static_cast<double>(n));
}

double std_normal_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double llt_ratio(const StepLaw& law, const LatticeRow& pmf_n, std::int64_t n, std::int64_t y) {
  const double mass = pmf_n.at(y);
  if (mass <= 0.0)
    throw UnreachableError("llt_ratio: lattice point " + std::to_string(y) + " is unreachable in " + std::to_string(n) +
                           " steps of '" + law.name() + "'");
  const double a = norming(law, n);
  return a * mass / std_normal_pdf(static_cast<double>(y) / a);
}

double llt_ratio(const StepLaw& law, std::int64_t n, std::int64_t y) {
  return llt_ratio(law, walk_pmf(law, n), n, y);
}

}  // namespace rwlab
