#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "../support/enumerate.hpp"
#include "rwlab/error.hpp"
#include "rwlab/ladder.hpp"
#include "rwlab/suite.hpp"
#include "rwlab/verify.hpp"

using namespace rwlab;

namespace {
const StepLaw lazy = make_builtin_law("lazy_srw");
const StepLaw three = make_builtin_law("three_point");
}  // namespace

TEST(Report, EvaluateStatuses) {
  VerificationReport r;
  r.reference = 1.0;
  r.tolerance = 0.1;
  r.computed = {{4, "", 1.3, {}}, {16, "", 1.05, {}}};
  evaluate_report(r);
  EXPECT_EQ(r.status, CheckStatus::pass);
  r.computed = {{4, "", 1.01, {}}, {16, "", 1.05, {}}};
  evaluate_report(r);
  EXPECT_EQ(r.status, CheckStatus::inconclusive);
  EXPECT_FALSE(r.trend_ok);
  r.computed = {{4, "", 1.3, {}}, {16, "", 1.2, {}}};
  evaluate_report(r);
  EXPECT_EQ(r.status, CheckStatus::fail);
  r.computed.clear();
  evaluate_report(r);
  EXPECT_EQ(r.status, CheckStatus::error);
}

TEST(Report, PassImpliesWithinTolerance) {
  for (const auto& r : {check_renewal_mass_ratio(lazy, {64, 256}, SequenceRule::constant(1)),
                        check_killed_density_scaling(three, {64, 256}, 1.0, 1.0), check_pi_limit(three, {64, 256})}) {
    ASSERT_FALSE(r.computed.empty());
    if (r.pass()) EXPECT_LE(std::abs(r.computed.back().value - r.reference), r.tolerance);
  }
}

TEST(Report, JsonRoundTrip) {
  auto r = check_survival_ratio(three, {64, 256}, {0, 2});
  r.seed = 99;
  const auto back = report_from_json(to_json(r));
  EXPECT_EQ(to_json(back).dump(), to_json(r).dump());
  EXPECT_NE(report_csv_rows(r).find("survival_ratio"), std::string::npos);
}

TEST(Rules, Parse) {
  EXPECT_EQ(SequenceRule::parse("const:3").at(100.0), 3);
  EXPECT_EQ(SequenceRule::parse("prop:0.25").at(45.25), 11);
  EXPECT_EQ(SequenceRule::parse("prop:0.5").describe(), "prop:0.5");
  EXPECT_THROW(SequenceRule::parse("const:1.5"), ConfigError);
  EXPECT_THROW(SequenceRule::parse("linear:2"), ConfigError);
}

TEST(Checks, RenewalMassRatioSmallCaseIsExact) {
  // n = 2, y = 0: u(2, 0) * 2 / (U(0) P[S_2 = 0]) from enumeration.
  const auto r = check_renewal_mass_ratio(lazy, {2}, SequenceRule::constant(0));
  const double U0 = renewal_U(lazy, 0)[0];
  const double u = static_cast<double>(oracle::u_mass(lazy, 2, 0));
  const double p = static_cast<double>(oracle::walk_pmf(lazy, 2).at(0));
  EXPECT_NEAR(r.computed.at(0).value, u * 2.0 / (U0 * p), 1e-15);
}

TEST(Checks, KilledRatioAtZeroReducesToRenewalRatio) {
  const std::vector<std::int64_t> ladder{64, 256};
  const auto a = check_killed_mass_ratio(three, ladder, 0, SequenceRule::constant(2));
  const auto b = check_renewal_mass_ratio(three, ladder, SequenceRule::constant(2));
  ASSERT_EQ(a.computed.size(), b.computed.size());
  for (std::size_t i = 0; i < a.computed.size(); ++i) EXPECT_DOUBLE_EQ(a.computed[i].value, b.computed[i].value);
}

TEST(Checks, ConditionedRatioSharesKilledMass) {
  const std::vector<std::int64_t> ladder{64, 256};
  const auto a = check_killed_mass_ratio(lazy, ladder, 2, SequenceRule::constant(2));
  const auto b = check_conditioned_mass_ratio(lazy, ladder, 2, 2);
  for (std::size_t i = 0; i < a.computed.size(); ++i)
    EXPECT_EQ(a.computed[i].detail["killed_mass"], b.computed[i].detail["killed_mass"]);
}

TEST(Checks, RenewalProductVanishesAtZero) {
  const auto r = check_renewal_product(lazy, {256, 1024, 4096}, SequenceRule::constant(0), SequenceRule::constant(3));
  EXPECT_LT(r.computed.back().value, 4 * 4.0 / 4096 + 1e-15);
}

TEST(Checks, SurvivalRatioAtZeroIsOne) {
  const auto r = check_survival_ratio(lazy, {16, 64}, {0});
  for (const auto& c : r.computed) EXPECT_DOUBLE_EQ(c.value, 1.0);
}

TEST(Checks, WienerHopfLargeLambda) {
  const auto r = check_wiener_hopf(three, 40.0, 100);
  const auto& d = r.computed.back().detail;
  EXPECT_NEAR(d["lhs_minus"].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(r.computed.back().value, 1.0, 1e-15);
}

TEST(Checks, FddUnreachableEndpointIsExplained) {
  try {
    check_fdd_convergence(lazy, FddOptions{8, 0, 20, {0.5}, 10, 1});
    FAIL() << "expected UnreachableError";
  } catch (const UnreachableError& e) {
    EXPECT_NE(std::string(e.what()).find("reachable"), std::string::npos);
  }
}

TEST(Checks, MonteCarloSeedsAgree) {
  FddOptions opt{256, 1, 1, {0.5}, 20000, 1};
  const auto a = check_fdd_convergence(lazy, opt);
  opt.seed = 2;
  const auto b = check_fdd_convergence(lazy, opt);
  const double floor = a.diagnostics["noise_floor"].get<double>();
  EXPECT_LT(std::abs(a.computed[0].value - b.computed[0].value), 2.0 * floor);
  ASSERT_TRUE(a.seed.has_value());
  EXPECT_EQ(*a.seed, 1u);
}

TEST(Suite, EmptyConfig) {
  const auto res = run_suite(SuiteConfig{});
  EXPECT_TRUE(res.reports.empty());
  EXPECT_TRUE(res.aggregate_pass);
}

TEST(Suite, ErrorsBecomeReports) {
  SuiteConfig c;
  c.checks.push_back({"bad_law", "pi_limit", "no_such_law", {{"ladder", {16}}}, false});
  c.checks.push_back({"bad_kind", "nonsense", "lazy_srw", {}, false});
  c.checks.push_back({"ok", "pi_limit", "lazy_srw", {{"ladder", {16, 64}}}, false});
  const auto res = run_suite(c);
  ASSERT_EQ(res.reports.size(), 3u);
  EXPECT_EQ(res.reports[0].status, CheckStatus::error);
  EXPECT_EQ(res.reports[1].status, CheckStatus::error);
  EXPECT_NE(res.reports[2].status, CheckStatus::error);
  EXPECT_FALSE(res.aggregate_pass);
}

TEST(Suite, ExpectedInconclusiveCounts) {
  SuiteConfig c;
  CheckSpec s{"trend", "killed_density_scaling", "lazy_srw", {{"ladder", {256, 1024, 4096}}, {"u", 1.0}, {"v", 1.0}}, true};
  c.checks.push_back(s);
  const auto res = run_suite(c);
  ASSERT_EQ(res.reports[0].status, CheckStatus::inconclusive);
  EXPECT_TRUE(res.aggregate_pass);
}

TEST(Suite, WorkerCountDoesNotChangeOutput) {
  SuiteConfig c;
  c.master_seed = 5;
  for (const auto& kind : {"pi_limit", "survival_ratio", "bridge_sampler", "polymer_decoupling"})
    c.checks.push_back(default_check(kind, "three_point", 256, 2000));
  c.workers = 1;
  const auto one = suite_to_json(c, run_suite(c)).dump();
  c.workers = 3;
  const auto three_workers = suite_to_json(c, run_suite(c)).dump();
  EXPECT_EQ(one, three_workers);
}

TEST(Suite, DefaultConfigCoversBothLaws) {
  const auto c = default_suite_config(1);
  std::set<std::string> laws, ids;
  for (const auto& s : c.checks) {
    laws.insert(s.law);
    EXPECT_TRUE(ids.insert(s.id).second) << "duplicate id " << s.id;
  }
  EXPECT_EQ(laws.size(), 2u);
}
