#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "../support/enumerate.hpp"
#include "rwlab/error.hpp"
#include "rwlab/polymer.hpp"
#include "rwlab/verify.hpp"

using namespace rwlab;

namespace {
const StepLaw lazy = make_builtin_law("lazy_srw");
const StepLaw three = make_builtin_law("three_point");
}  // namespace

TEST(Polymer, TwoStepLazyExample) {
  for (double eps : {-1.5, 0.0, 0.7}) {
    const auto p = make_polymer_params(lazy, 2, 0, eps);
    const double Z = partition_function(lazy, p);
    EXPECT_NEAR(Z, static_cast<double>(oracle::polymer_Z(lazy, 2, 0, eps)), 1e-15);
    // (0,0) carries 1/4 e^{2 eps}; (1,0) and (-1,0) carry 1/16 e^{eps} each.
    EXPECT_NEAR(Z, std::exp(2 * eps) / 4 + std::exp(eps) / 8, 1e-15);
  }
}

TEST(Polymer, MatchesEnumeration) {
  for (const auto& law : {lazy, three})
    for (std::int64_t N : {1, 5, 9})
      for (std::int64_t a : {0, 2})
        for (double eps : {-0.8, 0.4}) {
          const double ref = static_cast<double>(oracle::polymer_Z(law, N, a, eps));
          EXPECT_NEAR(partition_function(law, make_polymer_params(law, N, a, eps)), ref, 1e-12 * std::max(1.0, ref));
        }
}

TEST(Polymer, EpsZeroIsStripeProbability) {
  const auto p = make_polymer_params(three, 64, 1, 0.0);
  const auto pmf = walk_pmf(three, 64);
  EXPECT_NEAR(partition_function(three, p), pmf.at(0) + pmf.at(1), 1e-15);
}

TEST(Polymer, ContactsEqualDerivativeOfLogZ) {
  for (const auto& law : {lazy, three})
    for (double eps : {-1.0, 0.0, 1.0}) {
      const auto p = make_polymer_params(law, 64, 0, eps);
      const auto table = polymer_table(law, p);
      EXPECT_NEAR(log_partition_derivative(law, p), expected_contacts(table), 1e-6);
    }
}

TEST(Polymer, WindowDoublingIsNegligible) {
  const auto p = make_polymer_params(lazy, 64, 1, 1.0);
  EXPECT_LT(window_doubling_change(lazy, p), 1e-9);
  EXPECT_LT(partition_function_detail(lazy, p).relative_bias_bound, kPolymerBiasTolerance);
}

TEST(Polymer, TinyWindowIsRejected) {
  PolymerParams p{64, 0, 2.0, 3};
  EXPECT_THROW(partition_function(lazy, p), BudgetError);
  EXPECT_THROW(make_polymer_params(lazy, 0, 0, 0.0), ConfigError);
  PolymerParams narrow{8, 4, 0.0, 4};
  EXPECT_THROW(partition_function(lazy, narrow), ConfigError);
}

TEST(Polymer, SamplesEndInStripe) {
  const auto table = polymer_table(three, make_polymer_params(three, 40, 2, 0.3));
  RandomState rng(11);
  for (int s = 0; s < 500; ++s) {
    const auto path = sample_polymer(table, rng);
    ASSERT_EQ(path.length(), 40u);
    EXPECT_GE(path.positions.back(), 0);
    EXPECT_LE(path.positions.back(), 2);
    EXPECT_NO_THROW(validate_path(path, three));
  }
}

TEST(Polymer, MonteCarloContactsMatchExact) {
  // Mean contact count rises with eps and matches the exact expectation.
  double prev = -1.0;
  for (double eps : {-1.0, 0.0, 1.0}) {
    const auto table = polymer_table(lazy, make_polymer_params(lazy, 64, 0, eps));
    RandomState rng(RandomState::derive_seed(77, static_cast<std::uint64_t>(eps + 5)));
    const int samples = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
      const auto c = static_cast<double>(count_contacts(sample_polymer(table, rng), 0));
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
    EXPECT_LT(std::abs(mean - expected_contacts(table)), 3.0 * se);
    EXPECT_GT(mean, prev);
    prev = mean;
  }
}

TEST(Polymer, EpsZeroMarginalsMatchStripeBridge) {
  const std::int64_t N = 20, a = 1;
  const auto table = polymer_table(lazy, make_polymer_params(lazy, N, a, 0.0));
  const auto end = walk_pmf(lazy, N);
  const double norm = end.at(0) + end.at(1);
  RandomState rng(2024);
  const int samples = 100000;
  std::vector<std::map<std::int64_t, double>> counts(N + 1);
  for (int s = 0; s < samples; ++s) {
    const auto path = sample_polymer(table, rng);
    for (std::int64_t i = 1; i < N; ++i) counts[i][path.positions[i]] += 1.0;
  }
  for (std::int64_t i : {5, 10, 15}) {
    // P[S_i = z | S_N in [0, a]] from two unconditioned pmfs.
    const auto head = walk_pmf(lazy, i);
    const auto tail = walk_pmf(lazy, N - i);
    double stat = 0.0;
    int bins = 0;
    for (auto z = head.lo(); z <= head.hi(); ++z) {
      const double p = head.at(z) * (tail.at(-z) + tail.at(1 - z)) / norm;
      const double e = samples * p;
      if (e < 5.0) continue;
      const double o = counts[i][z];
      stat += (o - e) * (o - e) / e;
      ++bins;
    }
    const double pval = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins), stat));
    EXPECT_GT(pval, 0.001) << "i = " << i;
    const auto exact = polymer_marginal(table, i);
    for (auto z = head.lo(); z <= head.hi(); ++z)
      EXPECT_NEAR(exact.at(z), head.at(z) * (tail.at(-z) + tail.at(1 - z)) / norm, 1e-14);
  }
}

TEST(Polymer, Decoupling) {
  for (const auto& law : {lazy, three})
    for (std::int64_t a : {0, 1}) {
      const auto r = decoupling_check(law, make_polymer_params(law, 6, a, 0.5));
      EXPECT_TRUE(r.pass()) << law.name() << " a = " << a;
      EXPECT_LE(r.computed.back().value, 1e-12);
    }
  const auto r4 = decoupling_check(lazy, make_polymer_params(lazy, 4, 0, -0.3));
  EXPECT_TRUE(r4.pass());
  EXPECT_GT(r4.computed.back().detail["events_with_two_or_more_excursions"].get<int>(), 0);
  EXPECT_THROW(decoupling_check(lazy, make_polymer_params(lazy, 9, 0, 0.0)), DomainError);
}

TEST(Polymer, AllContactPathsAreVacuous) {
  // With one step every surviving path is a single contact.
  const auto r = decoupling_check(lazy, make_polymer_params(lazy, 1, 0, 0.0));
  EXPECT_TRUE(r.pass());
}
