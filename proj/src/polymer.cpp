#include "rwlab/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "rwlab/error.hpp"
#include "rwlab/verify.hpp"

namespace rwlab {

namespace {

void validate(const PolymerParams& p) {
  if (p.N < 1) throw ConfigError("polymer: N must be >= 1");
  if (p.a < 0) throw ConfigError("polymer: stripe width a must be >= 0");
  if (!std::isfinite(p.eps)) throw ConfigError("polymer: eps must be finite");
  if (p.window < p.a + 1) throw ConfigError("polymer: window must be >= a + 1");
}

// Restrict to [lo, hi]; returns the mass outside.
double clip(LatticeRow& row, std::int64_t lo, std::int64_t hi) {
  if (row.empty()) return 0.0;
  double outside = 0.0;
  std::vector<double> kept;
  const std::int64_t from = std::max(lo, row.lo());
  const std::int64_t to = std::min(hi, row.hi());
  for (std::int64_t z = row.lo(); z <= row.hi(); ++z) {
    if (z < from || z > to) outside += row.at(z);
  }
  if (from <= to) {
    kept.reserve(static_cast<std::size_t>(to - from + 1));
    for (std::int64_t z = from; z <= to; ++z) kept.push_back(row.at(z));
    row = LatticeRow(from, std::move(kept));
  } else {
    row = LatticeRow();
  }
  return outside;
}

struct ForwardPass {
  std::vector<LatticeRow> rows;
  double Z = 0.0;
  double bias = 0.0;
};

ForwardPass forward_pass(const StepLaw& law, const PolymerParams& p, bool keep_rows) {
  validate(p);
  const double weight = std::exp(p.eps);
  const double growth = std::exp(std::max(p.eps, 0.0));
  ForwardPass out;
  LatticeRow row = LatticeRow::point_mass(0);
  if (keep_rows) out.rows.push_back(row);
  for (std::int64_t i = 1; i <= p.N; ++i) {
    row = advance(row, law);
    const double dropped = clip(row, -p.window, p.window);
    row.scale_range(0, p.a, weight);
    if (dropped > 0.0) out.bias += dropped * std::pow(growth, static_cast<double>(p.N - i));
    if (keep_rows) out.rows.push_back(row);
  }
  for (std::int64_t z = 0; z <= p.a; ++z) out.Z += row.at(z);
  return out;
}

double relative_bias(const ForwardPass& f) {
  if (f.bias == 0.0) return 0.0;
  return f.Z > 0.0 ? f.bias / f.Z : std::numeric_limits<double>::infinity();
}

}  // namespace

PolymerParams make_polymer_params(const StepLaw& law, std::int64_t N, std::int64_t a, double eps) {
  if (N < 1) throw ConfigError("polymer: N must be >= 1");
  if (a < 0) throw ConfigError("polymer: stripe width a must be >= 0");
  const auto spread = static_cast<std::int64_t>(std::ceil(norming(law, N)));
  return {N, a, eps, a + 8 * spread};
}

PartitionFunction partition_function_detail(const StepLaw& law, const PolymerParams& p) {
  const auto f = forward_pass(law, p, false);
  PartitionFunction out{f.Z, relative_bias(f)};
  if (out.relative_bias_bound > kPolymerBiasTolerance) {
    std::ostringstream msg;
    msg << "partition_function: window " << p.window << " loses up to " << out.relative_bias_bound
        << " of Z (limit " << kPolymerBiasTolerance << "); enlarge the window";
    throw BudgetError(msg.str());
  }
  return out;
}

double partition_function(const StepLaw& law, const PolymerParams& p) { return partition_function_detail(law, p).Z; }

double window_doubling_change(const StepLaw& law, const PolymerParams& p) {
  PolymerParams wide = p;
  wide.window = 2 * p.window;
  const double z1 = forward_pass(law, p, false).Z;
  const double z2 = forward_pass(law, wide, false).Z;
  if (z2 == 0.0) return z1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(z1 / z2 - 1.0);
}

PolymerTable polymer_table(const StepLaw& law, const PolymerParams& p) {
  auto f = forward_pass(law, p, true);
  if (const double b = relative_bias(f); b > kPolymerBiasTolerance) {
    std::ostringstream msg;
    msg << "polymer_table: window " << p.window << " loses up to " << b << " of Z; enlarge the window";
    throw BudgetError(msg.str());
  }
  if (!(f.Z > 0.0)) throw UnreachableError("polymer_table: Z = 0, the stripe cannot be reached at time N");

  const double weight = std::exp(p.eps);
  const StepLaw back = law.reversed();
  std::vector<LatticeRow> backward(static_cast<std::size_t>(p.N + 1));
  backward.back() = LatticeRow(0, std::vector<double>(static_cast<std::size_t>(p.a + 1), 1.0));
  for (std::int64_t i = p.N - 1; i >= 0; --i) {
    LatticeRow next = backward[static_cast<std::size_t>(i + 1)];
    next.scale_range(0, p.a, weight);
    backward[static_cast<std::size_t>(i)] = advance(next, back, StateWindow::between(-p.window, p.window));
  }
  PolymerTable t{law, p, std::move(f.rows), std::move(backward), f.Z};
  return t;
}

LatticePath sample_polymer(const PolymerTable& table, RandomState& rng) {
  const auto& p = table.params;
  const double weight = std::exp(p.eps);
  const auto support = table.law.support();
  std::vector<double> w(support.size());
  LatticePath path;
  path.positions.reserve(static_cast<std::size_t>(p.N + 1));
  std::int64_t z = 0;
  path.positions.push_back(z);
  for (std::int64_t i = 0; i < p.N; ++i) {
    const auto& h = table.backward[static_cast<std::size_t>(i + 1)];
    double total = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) {
      const std::int64_t next = z + support[k].offset;
      const double contact = (next >= 0 && next <= p.a) ? weight : 1.0;
      w[k] = support[k].probability * contact * h.at(next);
      total += w[k];
    }
    if (!(total > 0.0)) throw NumericError("sample_polymer: reached a state with zero continuation weight");
    double u = rng.uniform() * total;
    std::size_t pick = support.size() - 1;
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (w[k] <= 0.0) continue;
      if (u < w[k]) {
        pick = k;
        break;
      }
      u -= w[k];
    }
    while (w[pick] <= 0.0) --pick;
    z += support[pick].offset;
    path.positions.push_back(z);
  }
  return path;
}

LatticePath sample_polymer(const StepLaw& law, const PolymerParams& p, RandomState& rng) {
  return sample_polymer(polymer_table(law, p), rng);
}

LatticeRow polymer_marginal(const PolymerTable& table, std::int64_t i) {
  if (i < 0 || i > table.params.N) throw DomainError("polymer_marginal: time outside [0, N]");
  const auto& f = table.forward[static_cast<std::size_t>(i)];
  const auto& b = table.backward[static_cast<std::size_t>(i)];
  std::vector<double> mass(f.size());
  for (std::int64_t z = f.lo(); z <= f.hi(); ++z)
    mass[static_cast<std::size_t>(z - f.lo())] = f.at(z) * b.at(z) / table.Z;
  LatticeRow row(f.lo(), std::move(mass));
  row.trim();
  return row;
}

double expected_contacts(const PolymerTable& table) {
  double acc = 0.0;
  for (std::int64_t i = 1; i <= table.params.N; ++i) {
    const auto& f = table.forward[static_cast<std::size_t>(i)];
    const auto& b = table.backward[static_cast<std::size_t>(i)];
    for (std::int64_t z = 0; z <= table.params.a; ++z) acc += f.at(z) * b.at(z);
  }
  return acc / table.Z;
}

double log_partition_derivative(const StepLaw& law, const PolymerParams& p, double step) {
  if (!(step > 0.0)) throw DomainError("log_partition_derivative: step must be > 0");
  PolymerParams up = p, down = p;
  up.eps += step;
  down.eps -= step;
  const double zu = partition_function(law, up);
  const double zd = partition_function(law, down);
  if (!(zu > 0.0 && zd > 0.0)) throw UnreachableError("log_partition_derivative: Z = 0");
  return (std::log(zu) - std::log(zd)) / (2.0 * step);
}

std::int64_t count_contacts(const LatticePath& path, std::int64_t a) {
  std::int64_t c = 0;
  for (std::size_t i = 1; i < path.positions.size(); ++i)
    if (path.positions[i] >= 0 && path.positions[i] <= a) ++c;
  return c;
}

namespace {

using Segment = std::vector<std::int64_t>;

// P[S_L = e, S_j not in [0, a] for 0 < j < L | S_0 = s].
double avoiding_mass(const StepLaw& law, std::int64_t s, std::int64_t e, std::int64_t L, std::int64_t a) {
  LatticeRow row = LatticeRow::point_mass(s);
  for (std::int64_t j = 1; j < L; ++j) {
    row = advance(row, law);
    row.scale_range(0, a, 0.0);
  }
  return advance(row, law).at(e);
}

struct Group {
  double total = 0.0;
  std::map<std::vector<Segment>, double> joint;
};

}  // namespace

VerificationReport decoupling_check(const StepLaw& law, const PolymerParams& p) {
  validate(p);
  if (p.N > 8) throw DomainError("decoupling_check: enumeration needs N <= 8");

  VerificationReport report;
  report.check_id = "polymer_decoupling";
  report.kind = "polymer_decoupling";
  report.law = law.name();
  report.parameters = {{"N", p.N}, {"a", p.a}, {"eps", p.eps}};
  report.reference = 0.0;
  report.tolerance = 1e-12;

  const auto support = law.support();
  const double weight = std::exp(p.eps);
  std::map<std::vector<std::int64_t>, Group> groups;  // key: contact times then positions

  std::vector<std::size_t> idx(static_cast<std::size_t>(p.N), 0);
  std::vector<std::int64_t> pos(static_cast<std::size_t>(p.N + 1), 0);
  for (;;) {
    double w = 1.0;
    for (std::int64_t i = 1; i <= p.N; ++i) {
      const auto& m = support[idx[static_cast<std::size_t>(i - 1)]];
      pos[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(i - 1)] + m.offset;
      w *= m.probability;
      const auto z = pos[static_cast<std::size_t>(i)];
      if (z >= 0 && z <= p.a) w *= weight;
    }
    const auto end = pos.back();
    if (end >= 0 && end <= p.a) {
      std::vector<std::int64_t> key, anchors{0};
      for (std::int64_t i = 1; i <= p.N; ++i) {
        const auto z = pos[static_cast<std::size_t>(i)];
        if (z >= 0 && z <= p.a) {
          anchors.push_back(i);
          key.push_back(i);
          key.push_back(z);
        }
      }
      std::vector<Segment> segments;
      for (std::size_t j = 0; j + 1 < anchors.size(); ++j)
        segments.emplace_back(pos.begin() + anchors[j], pos.begin() + anchors[j + 1] + 1);
      auto& g = groups[key];
      g.total += w;
      g.joint[segments] += w;
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == support.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }

  double max_joint = 0.0, max_functional = 0.0, max_conditional = 0.0;
  std::int64_t informative = 0;
  for (const auto& [key, g] : groups) {
    const std::size_t k = g.joint.begin()->first.size();
    std::vector<std::map<Segment, double>> marginal(k);
    std::vector<std::map<std::int64_t, double>> max_marginal(k);
    std::map<std::vector<std::int64_t>, double> max_joint_law;
    std::size_t nontrivial = 0;
    for (const auto& [segs, w] : g.joint) {
      std::vector<std::int64_t> maxima;
      for (std::size_t j = 0; j < k; ++j) {
        marginal[j][segs[j]] += w / g.total;
        const auto top = *std::max_element(segs[j].begin(), segs[j].end());
        max_marginal[j][top] += w / g.total;
        maxima.push_back(top);
      }
      max_joint_law[maxima] += w / g.total;
    }
    for (std::size_t j = 0; j < k; ++j)
      if (marginal[j].size() > 1) ++nontrivial;
    if (nontrivial >= 2) ++informative;

    // Joint law of the segments against the product of marginals, over the
    // full product support.
    std::size_t product_size = 1;
    for (const auto& m : marginal) product_size *= m.size();
    if (product_size != g.joint.size()) max_joint = std::max(max_joint, 1.0);
    for (const auto& [segs, w] : g.joint) {
      double prod = 1.0;
      for (std::size_t j = 0; j < k; ++j) prod *= marginal[j].at(segs[j]);
      max_joint = std::max(max_joint, std::abs(w / g.total - prod));
    }
    std::size_t max_product_size = 1;
    for (const auto& m : max_marginal) max_product_size *= m.size();
    if (max_product_size != max_joint_law.size()) max_functional = std::max(max_functional, 1.0);
    for (const auto& [maxima, q] : max_joint_law) {
      double prod = 1.0;
      for (std::size_t j = 0; j < k; ++j) prod *= max_marginal[j].at(maxima[j]);
      max_functional = std::max(max_functional, std::abs(q - prod));
    }
    // Each segment is the walk bridge that avoids the stripe in between.
    for (std::size_t j = 0; j < k; ++j) {
      const auto& first = marginal[j].begin()->first;
      const auto L = static_cast<std::int64_t>(first.size()) - 1;
      const double norm = avoiding_mass(law, first.front(), first.back(), L, p.a);
      for (const auto& [seg, q] : marginal[j]) {
        double pr = 1.0;
        for (std::size_t s = 1; s < seg.size(); ++s) pr *= law.probability(seg[s] - seg[s - 1]);
        max_conditional = std::max(max_conditional, std::abs(q - pr / norm));
      }
    }
  }

  ComputedValue cv;
  cv.n = p.N;
  cv.value = std::max({max_joint, max_functional, max_conditional});
  cv.detail = {{"joint_vs_product", max_joint},
               {"maxima_joint_vs_product", max_functional},
               {"segment_vs_avoiding_bridge", max_conditional},
               {"conditioning_events", groups.size()},
               {"events_with_two_or_more_excursions", informative}};
  report.computed.push_back(cv);
  if (groups.empty()) report.notes.push_back("no path ends in the stripe; nothing to condition on");
  if (informative == 0) report.notes.push_back("no conditioning event has two random excursions; factorization is vacuous");
  evaluate_report(report);
  return report;
}

}  // namespace rwlab
