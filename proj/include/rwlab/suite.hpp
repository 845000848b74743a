#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "rwlab/verify.hpp"

namespace rwlab {

struct CheckSpec {
  std::string id;
  std::string kind;  // one of check_kinds()
  std::string law;   // builtin name or law file path
  nlohmann::json params = nlohmann::json::object();
  bool expected_inconclusive = false;
};

struct SuiteConfig {
  std::uint64_t master_seed = 20240917;
  std::vector<CheckSpec> checks;
  unsigned workers = 1;
};

struct SuiteResult {
  std::vector<VerificationReport> reports;  // configuration order
  bool aggregate_pass = true;
};

std::vector<std::string> check_kinds();

// Default parameters of `kind` for one law; n_max scales the n-ladder to
// {n_max/16, n_max/4, n_max} and samples sets the Monte Carlo size.
CheckSpec default_check(const std::string& kind, const std::string& law, std::int64_t n_max = 4096,
                        std::int64_t samples = 200000);

// Every check for both builtin laws.
SuiteConfig default_suite_config(std::uint64_t master_seed = 20240917);

// Runs one check. Exceptions become a report with status error.
VerificationReport run_check(const CheckSpec& spec, std::uint64_t master_seed);

// Runs the checks on `workers` threads; reports come back in configuration
// order and do not depend on the number of workers.
SuiteResult run_suite(const SuiteConfig& config);

nlohmann::json suite_to_json(const SuiteConfig& config, const SuiteResult& result);

}  // namespace rwlab
