#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "../support/enumerate.hpp"
#include "rwlab/error.hpp"
#include "rwlab/lattice.hpp"
#include "rwlab/steplaw.hpp"

using namespace rwlab;

TEST(StepLaw, BuiltinMoments) {
  const auto lazy = make_builtin_law(BuiltinLaw::lazy_srw);
  EXPECT_DOUBLE_EQ(lazy.sigma2(), 0.5);
  EXPECT_EQ(lazy.max_up(), 1);
  EXPECT_EQ(lazy.max_down(), 1);
  const auto tp = make_builtin_law("three_point");
  EXPECT_DOUBLE_EQ(tp.sigma2(), 1.5);
  EXPECT_EQ(tp.max_up(), 1);
  EXPECT_EQ(tp.max_down(), 2);
  EXPECT_DOUBLE_EQ(tp.probability(-2), 0.25);
  EXPECT_DOUBLE_EQ(tp.probability(5), 0.0);
}

TEST(StepLaw, RejectsInvalidLaws) {
  EXPECT_THROW(StepLaw("mass", {{-1, 0.3}, {1, 0.3}}), ConfigError);
  EXPECT_THROW(StepLaw("drift", {{0, 0.5}, {1, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw("periodic", {{-1, 0.5}, {1, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw("dup", {{-1, 0.25}, {-1, 0.25}, {1, 0.5}}), ConfigError);
  EXPECT_THROW(StepLaw("neg", {{-1, 0.75}, {1, -0.25}, {2, 0.5}}), ConfigError);
  EXPECT_THROW(make_builtin_law("nope"), ConfigError);
  EXPECT_THROW(resolve_step_law("/nonexistent/law.txt"), ConfigError);
}

TEST(StepLaw, EvenStepLawIsPeriodic) {
  EXPECT_EQ(return_time_gcd(make_builtin_law("lazy_srw")), 1);
  // Returns at every time, but only ever visits 2Z.
  EXPECT_THROW(StepLaw("pm2", {{-2, 0.25}, {0, 0.5}, {2, 0.25}}), ConfigError);
}

TEST(StepLaw, ParsesTextFormat) {
  std::istringstream in("# lazy walk\n-1 1/4\n0 0.5   # stay\n1 1/4\n");
  const auto law = parse_step_law(in, "parsed");
  EXPECT_TRUE(law == make_builtin_law("lazy_srw"));
  std::istringstream bad("-1 1/0\n1 1\n");
  EXPECT_THROW(parse_step_law(bad, "bad"), ConfigError);
  std::istringstream junk("-1 quarter\n");
  EXPECT_THROW(parse_step_law(junk, "junk"), ConfigError);
}

TEST(StepLaw, LoadsFromFile) {
  const std::string path = ::testing::TempDir() + "/three.law";
  {
    std::ofstream out(path);
    out << "-2 1/4\n0 1/4\n1 1/2\n";
  }
  const auto law = resolve_step_law(path);
  EXPECT_DOUBLE_EQ(law.sigma2(), 1.5);
}

TEST(StepLaw, ReversedNegatesSupport) {
  const auto r = make_builtin_law("three_point").reversed();
  EXPECT_DOUBLE_EQ(r.probability(2), 0.25);
  EXPECT_DOUBLE_EQ(r.probability(-1), 0.5);
  EXPECT_EQ(r.max_up(), 2);
  EXPECT_EQ(r.max_down(), 1);
}

TEST(StepLaw, WalkPmfLazyTwoSteps) {
  const auto row = walk_pmf(make_builtin_law("lazy_srw"), 2);
  EXPECT_DOUBLE_EQ(row.at(-2), 1.0 / 16);
  EXPECT_DOUBLE_EQ(row.at(-1), 1.0 / 4);
  EXPECT_DOUBLE_EQ(row.at(0), 3.0 / 8);
  EXPECT_DOUBLE_EQ(row.at(1), 1.0 / 4);
  EXPECT_DOUBLE_EQ(row.at(2), 1.0 / 16);
}

TEST(StepLaw, WalkPmfMatchesEnumeration) {
  for (const char* name : {"lazy_srw", "three_point"}) {
    const auto law = make_builtin_law(name);
    for (std::int64_t n = 0; n <= 8; ++n) {
      const auto row = walk_pmf(law, n);
      for (const auto& [z, p] : oracle::walk_pmf(law, n)) EXPECT_NEAR(row.at(z), static_cast<double>(p), 1e-15);
      EXPECT_NEAR(row.total(), 1.0, 1e-14);
    }
  }
}

TEST(StepLaw, LocalLimitRatioTendsToOne) {
  const auto law = make_builtin_law("lazy_srw");
  EXPECT_NEAR(llt_ratio(law, 4096, 0), 1.0, 1e-3);
  EXPECT_NEAR(llt_ratio(law, 4096, 30), 1.0, 1e-2);
  EXPECT_THROW(llt_ratio(law, 2, 5), UnreachableError);
}

TEST(StepLaw, NormingPreconditions) {
  const auto law = make_builtin_law("lazy_srw");
  EXPECT_DOUBLE_EQ(norming(law, 2), 1.0);
  EXPECT_THROW(norming(law, 0), DomainError);
  EXPECT_THROW(walk_pmf(law, -1), DomainError);
}

TEST(StepLaw, PathValidation) {
  const auto law = make_builtin_law("lazy_srw");
  LatticePath ok{{0, 1, 1, 0}};
  EXPECT_NO_THROW(validate_path(ok, law));
  EXPECT_EQ(ok.length(), 3u);
  EXPECT_EQ(ok.steps(), (std::vector<std::int64_t>{1, 0, -1}));
  LatticePath bad{{0, 2}};
  EXPECT_THROW(validate_path(bad, law), DomainError);
}

TEST(Lattice, AdvanceRespectsWindow) {
  const auto law = make_builtin_law("lazy_srw");
  auto row = advance(LatticeRow::point_mass(0), law, StateWindow::non_negative());
  EXPECT_EQ(row.lo(), 0);
  EXPECT_DOUBLE_EQ(row.total(), 0.75);
  row.scale_range(1, 1, 2.0);
  EXPECT_DOUBLE_EQ(row.at(1), 0.5);
  EXPECT_DOUBLE_EQ(row.at(7), 0.0);
}

TEST(Lattice, TrimFlushesUnderflow) {
  LatticeRow row(-2, {1e-310, 0.5, 1e-305, 0.5, 0.0});
  row.trim();
  EXPECT_EQ(row.lo(), -1);
  EXPECT_EQ(row.hi(), 1);
  EXPECT_DOUBLE_EQ(row.at(0), 0.0);
}
