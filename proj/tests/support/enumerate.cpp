#include "enumerate.hpp"

#include <cmath>
#include <vector>

namespace oracle {

void for_each_path(const rwlab::StepLaw& law, std::int64_t start, std::int64_t n, const Visitor& visit) {
  const auto support = law.support();
  std::vector<std::int64_t> pos(static_cast<std::size_t>(n + 1), start);
  std::vector<long double> prob(static_cast<std::size_t>(n + 1), 1.0L);
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == static_cast<std::size_t>(n)) {
      visit(pos, prob[depth]);
      return;
    }
    for (const auto& m : support) {
      pos[depth + 1] = pos[depth] + m.offset;
      prob[depth + 1] = prob[depth] * static_cast<long double>(m.probability);
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
}

std::map<std::int64_t, long double> walk_pmf(const rwlab::StepLaw& law, std::int64_t n) {
  std::map<std::int64_t, long double> out;
  for_each_path(law, 0, n, [&](auto pos, long double p) { out[pos.back()] += p; });
  return out;
}

std::map<std::int64_t, long double> killed_pmf(const rwlab::StepLaw& law, std::int64_t start, std::int64_t n) {
  std::map<std::int64_t, long double> out;
  for_each_path(law, start, n, [&](auto pos, long double p) {
    for (auto z : pos)
      if (z < 0) return;
    out[pos.back()] += p;
  });
  return out;
}

long double u_mass(const rwlab::StepLaw& law, std::int64_t n, std::int64_t x) {
  const auto k = killed_pmf(law, 0, n);
  const auto it = k.find(x);
  return it == k.end() ? 0.0L : it->second;
}

long double v_mass(const rwlab::StepLaw& law, std::int64_t n, std::int64_t x) {
  long double acc = 0.0L;
  for_each_path(law, 0, n, [&](auto pos, long double p) {
    if (pos.back() != -x) return;
    for (std::size_t j = 1; j + 1 < pos.size(); ++j)
      if (pos[j] <= -x) return;
    acc += p;
  });
  return acc;
}

long double polymer_Z(const rwlab::StepLaw& law, std::int64_t N, std::int64_t a, double eps) {
  long double acc = 0.0L;
  for_each_path(law, 0, N, [&](auto pos, long double p) {
    if (pos.back() < 0 || pos.back() > a) return;
    int contacts = 0;
    for (std::size_t i = 1; i < pos.size(); ++i)
      if (pos[i] >= 0 && pos[i] <= a) ++contacts;
    acc += p * std::exp(static_cast<long double>(eps) * contacts);
  });
  return acc;
}

}  // namespace oracle
