#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwlab/steplaw.hpp"

namespace rwlab {

enum class CheckStatus { pass, fail, inconclusive, error, skipped };

std::string_view to_string(CheckStatus s);
CheckStatus check_status_from_string(std::string_view s);

// One computed point along a check's n-ladder. Checks that track several
// quantities at once (several x, several t) tag them with `series`.
struct ComputedValue {
  std::int64_t n = 0;
  std::string series;
  double value = 0.0;
  nlohmann::json detail = nlohmann::json::object();
};

struct VerificationReport {
  std::string check_id;
  std::string kind;
  std::string law;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<ComputedValue> computed;
  double reference = 0.0;
  double tolerance = 0.0;
  bool trend_ok = true;
  CheckStatus status = CheckStatus::error;
  std::optional<std::uint64_t> seed;  // set for Monte Carlo checks
  nlohmann::json diagnostics = nlohmann::json::object();
  std::vector<std::string> notes;

  bool pass() const noexcept { return status == CheckStatus::pass; }
  // max over series of |value - reference| at the largest n of that series.
  double final_error() const;
};

// Sets trend_ok (per series, |error| at the largest n must not exceed the one
// at the second largest n) and the status: fail when final_error exceeds the
// tolerance, otherwise inconclusive when the trend fails, otherwise pass.
void evaluate_report(VerificationReport& r);

nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

// Flat CSV projection: check_id,kind,law,status,series,n,value,reference,tolerance.
std::string reports_csv_header();
std::string report_csv_rows(const VerificationReport& r);

// Integer sequence indexed by n: either a constant or floor(c * a_n).
struct SequenceRule {
  enum class Kind { constant, proportional };
  Kind kind = Kind::constant;
  double value = 0.0;

  static SequenceRule constant(std::int64_t c) { return {Kind::constant, static_cast<double>(c)}; }
  static SequenceRule proportional(double c) { return {Kind::proportional, c}; }
  // "const:3" or "prop:0.25".
  static SequenceRule parse(std::string_view text);
  std::string describe() const;
  std::int64_t at(double a_n) const;
};

std::vector<std::int64_t> default_ladder();  // {2^8, 2^10, 2^12}

VerificationReport check_renewal_mass_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder, SequenceRule y);
VerificationReport check_killed_mass_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder, std::int64_t x,
                                           SequenceRule y);
VerificationReport check_renewal_product(const StepLaw& law, const std::vector<std::int64_t>& ladder, SequenceRule x,
                                         SequenceRule y);
VerificationReport check_conditioned_mass_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder, std::int64_t x,
                                                std::int64_t y);
VerificationReport check_killed_density_scaling(const StepLaw& law, const std::vector<std::int64_t>& ladder, double u, double v);
VerificationReport check_wiener_hopf(const StepLaw& law, double lambda, std::int64_t n_max);
VerificationReport check_pi_limit(const StepLaw& law, const std::vector<std::int64_t>& ladder);
// Ratios are reported divided by V(x), so the reference is 1.
VerificationReport check_survival_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder,
                                        const std::vector<std::int64_t>& xs);
// P[T_1^- > n] / P[T_1^- > 2n] against sqrt 2.
VerificationReport check_ladder_tail_index(const StepLaw& law, const std::vector<std::int64_t>& ladder);

struct FddOptions {
  std::int64_t n = 1024;
  std::int64_t x = 1;
  std::int64_t y = 1;
  std::vector<double> times{0.25, 0.5, 0.75};
  std::int64_t samples = 200000;
  std::uint64_t seed = 0;
};

// KS distance between sampled bridge marginals and the excursion CDF.
VerificationReport check_fdd_convergence(const StepLaw& law, const FddOptions& opt);
// L1 distance between the exact bridge marginal and the excursion law on
// the cells [(z - 1/2)/a_n, (z + 1/2)/a_n), along the n-ladder.
VerificationReport check_fdd_exact_l1(const StepLaw& law, const std::vector<std::int64_t>& ladder, std::int64_t x,
                                      std::int64_t y, const std::vector<double>& times);
// Chi-square goodness of fit of every sampled bridge marginal against the
// exact one; value is the smallest p-value.
VerificationReport check_bridge_sampler(const StepLaw& law, std::int64_t n, std::int64_t x, std::int64_t y,
                                        std::int64_t samples, std::uint64_t seed);

VerificationReport check_harmonicity(const StepLaw& law, std::int64_t x_max);
VerificationReport check_duality(const StepLaw& law, std::int64_t n_max, std::int64_t x_max);
// |d/d eps log Z - E[#contacts]| by exact DP.
VerificationReport check_polymer_contacts(const StepLaw& law, std::int64_t N, std::int64_t a, double eps);
// |Z(eps = 0) - P[S_N in [0, a]]|.
VerificationReport check_polymer_eps0(const StepLaw& law, std::int64_t N, std::int64_t a);

}  // namespace rwlab
