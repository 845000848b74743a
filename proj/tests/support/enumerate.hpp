#pragma once

// Brute-force path enumeration used as an independent oracle. Every builtin
// law has dyadic masses, so sums in long double are exact for n <= 10.

#include <cstdint>
#include <functional>
#include <map>
#include <span>

#include "rwlab/steplaw.hpp"

namespace oracle {

using Visitor = std::function<void(std::span<const std::int64_t> positions, long double prob)>;

// Calls `visit` once for each of the |support|^n paths from `start`.
void for_each_path(const rwlab::StepLaw& law, std::int64_t start, std::int64_t n, const Visitor& visit);

std::map<std::int64_t, long double> walk_pmf(const rwlab::StepLaw& law, std::int64_t n);
// Law of S_n on {S_j >= 0 for all j <= n} under P_start.
std::map<std::int64_t, long double> killed_pmf(const rwlab::StepLaw& law, std::int64_t start, std::int64_t n);
// P[S_1 >= 0, ..., S_n >= 0, S_n = x].
long double u_mass(const rwlab::StepLaw& law, std::int64_t n, std::int64_t x);
// P[S_n = -x, S_j > -x for j < n].
long double v_mass(const rwlab::StepLaw& law, std::int64_t n, std::int64_t x);
// E[exp(eps * #{i : S_i in [0, a]}) ; S_N in [0, a]].
long double polymer_Z(const rwlab::StepLaw& law, std::int64_t N, std::int64_t a, double eps);

}  // namespace oracle
