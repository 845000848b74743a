#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "../support/enumerate.hpp"
#include "rwlab/conditioned.hpp"
#include "rwlab/error.hpp"
#include "rwlab/path_io.hpp"

using namespace rwlab;

namespace {
const StepLaw lazy = make_builtin_law("lazy_srw");
const StepLaw three = make_builtin_law("three_point");
}  // namespace

TEST(Kernel, RowsAreProbabilities) {
  for (const auto& law : {lazy, three}) {
    const ConditionedKernel k(build_renewal_table(law, 128, 8));
    for (std::int64_t x = 0; x <= k.last_state(); ++x) EXPECT_NEAR(k.row(x).total(), 1.0, 1e-12);
  }
}

TEST(Kernel, LazyFromZero) {
  const ConditionedKernel k(build_renewal_table(lazy, 64, 8));
  EXPECT_DOUBLE_EQ(k.transition(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(k.transition(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(k.transition(0, -1), 0.0);

  // Frequencies of the first step over 10^6 samples within 3 binomial sigma.
  RandomState rng(42);
  const int samples = 1000000;
  int up = 0;
  for (int s = 0; s < samples; ++s) up += sample_conditioned(k, 0, 1, rng).positions[1] == 1;
  const double sd = std::sqrt(samples * 0.25);
  EXPECT_LT(std::abs(up - samples / 2.0), 3.0 * sd);
}

TEST(Kernel, RejectsInconsistentTable) {
  auto t = build_renewal_table(lazy, 64, 8);
  t.V[10] += 1.0;
  EXPECT_THROW(ConditionedKernel{t}, TableInconsistency);
}

TEST(Kernel, SamplerBudget) {
  const ConditionedKernel k(build_renewal_table(lazy, 32, 8));
  RandomState rng(1);
  EXPECT_THROW(sample_conditioned(k, 0, 100, rng), BudgetError);
  const auto path = sample_conditioned(k, 3, 20, rng);
  EXPECT_EQ(path.length(), 20u);
  for (auto z : path.positions) EXPECT_GE(z, 0);
}

TEST(Bridge, NormalizerMatchesEnumeration) {
  for (const auto& law : {lazy, three})
    for (std::int64_t n = 1; n <= 8; ++n)
      for (std::int64_t x : {0, 1, 2})
        for (std::int64_t y : {0, 1, 3}) {
          const double ref = [&] {
            const auto k = oracle::killed_pmf(law, x, n);
            const auto it = k.find(y);
            return it == k.end() ? 0.0 : static_cast<double>(it->second);
          }();
          if (ref == 0.0) {
            EXPECT_THROW(bridge_table(law, x, y, n), UnreachableError);
          } else {
            EXPECT_NEAR(bridge_table(law, x, y, n).normalizer, ref, 1e-15);
          }
        }
}

TEST(Bridge, MarginalsMatchEnumeration) {
  const std::int64_t n = 6, x = 1, y = 0;
  const auto table = bridge_table(three, x, y, n);
  for (std::int64_t m = 0; m <= n; ++m) {
    std::map<std::int64_t, long double> ref;
    long double total = 0.0L;
    oracle::for_each_path(three, x, n, [&](auto pos, long double p) {
      if (pos.back() != y) return;
      for (auto z : pos)
        if (z < 0) return;
      ref[pos[static_cast<std::size_t>(m)]] += p;
      total += p;
    });
    const auto row = bridge_marginal_exact(table, m);
    const auto direct = bridge_marginal_exact(three, x, y, n, m);
    for (const auto& [z, p] : ref) {
      EXPECT_NEAR(row.at(z), static_cast<double>(p / total), 1e-14);
      EXPECT_NEAR(direct.at(z), static_cast<double>(p / total), 1e-14);
    }
  }
}

TEST(Bridge, SamplesArePinnedAndNonNegative) {
  const auto table = bridge_table(lazy, 2, 1, 50);
  RandomState rng(9);
  for (int s = 0; s < 200; ++s) {
    const auto path = sample_bridge(table, rng);
    ASSERT_EQ(path.length(), 50u);
    EXPECT_EQ(path.positions.front(), 2);
    EXPECT_EQ(path.positions.back(), 1);
    for (auto z : path.positions) EXPECT_GE(z, 0);
    EXPECT_NO_THROW(validate_path(path, lazy));
  }
}

TEST(Bridge, SameSeedSamePath) {
  const auto table = bridge_table(three, 1, 1, 40);
  RandomState a(5), b(5);
  EXPECT_EQ(sample_bridge(table, a).positions, sample_bridge(table, b).positions);
}

TEST(Bridge, Budget) { EXPECT_THROW(bridge_table(lazy, 1, 1, 4096, 1000), BudgetError); }

TEST(Bridge, RescalePath) {
  LatticePath p{{0, 1, 2, 1, 0}};
  const std::vector<double> grid{0.0, 0.3, 0.5, 1.0};
  const auto v = rescale_path(p, 4, 2.0, grid);
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 0.5);
  EXPECT_DOUBLE_EQ(v[2], 1.0);
  EXPECT_DOUBLE_EQ(v[3], 0.0);
  EXPECT_THROW(rescale_path(p, 8, 2.0, grid), DomainError);
}

TEST(Random, DerivedSeedsAreStable) {
  EXPECT_EQ(RandomState::derive_seed(1, 0), RandomState::derive_seed(1, 0));
  EXPECT_NE(RandomState::derive_seed(1, 0), RandomState::derive_seed(1, 1));
  EXPECT_NE(RandomState::derive_seed(1, "a"), RandomState::derive_seed(1, "b"));
  RandomState r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(PathIo, CsvRoundTrip) {
  std::vector<LatticePath> paths{{{0, 1, 0}}, {{2, 1}}};
  std::stringstream buf;
  write_paths_csv(buf, paths);
  const auto back = read_paths_csv(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].positions, paths[0].positions);
  EXPECT_EQ(back[1].positions, paths[1].positions);
  std::stringstream bad("replica,step,position\n0,1,5\n");
  EXPECT_THROW(read_paths_csv(bad), ConfigError);
}

TEST(PathIo, BinaryRoundTrip) {
  std::stringstream buf;
  write_path_frame(buf, LatticePath{{-3, 0, 7}});
  write_path_frame(buf, LatticePath{{1}});
  const auto a = read_path_frame(buf);
  const auto b = read_path_frame(buf);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->positions, (std::vector<std::int64_t>{-3, 0, 7}));
  EXPECT_EQ(b->positions, (std::vector<std::int64_t>{1}));
  EXPECT_FALSE(read_path_frame(buf).has_value());
  std::stringstream cut(std::string("\x02\0\0\0\0\0\0\0\x01", 9));
  EXPECT_THROW(read_path_frame(cut), ConfigError);
}
