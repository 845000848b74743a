#include "rwlab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rwlab/error.hpp"
#include "rwlab/polymer.hpp"
#include "rwlab/random.hpp"
#include "rwlab/schema.hpp"

namespace rwlab {

namespace {

const std::vector<std::string> kKinds = {
    "renewal_mass_ratio", "killed_mass_ratio", "renewal_product", "conditioned_mass_ratio",
    "killed_density_scaling", "wiener_hopf", "pi_limit", "survival_ratio",
    "ladder_tail_index", "fdd_convergence", "fdd_exact_l1", "bridge_sampler",
    "harmonicity", "duality", "polymer_eps0", "polymer_contacts",
    "polymer_decoupling"};

bool is_monte_carlo(const std::string& kind) { return kind == "fdd_convergence" || kind == "bridge_sampler"; }

std::vector<std::int64_t> ladder_for(std::int64_t n_max) {
  if (n_max < 16) throw ConfigError("n-max must be >= 16, got " + std::to_string(n_max));
  return {n_max / 16, n_max / 4, n_max};
}

template <class T>
T param(const nlohmann::json& p, const char* key) {
  if (!p.contains(key)) throw ConfigError(std::string("missing check parameter '") + key + "'");
  try {
    return p.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("check parameter '") + key + "' has the wrong type");
  }
}

VerificationReport dispatch(const CheckSpec& spec, const StepLaw& law, std::uint64_t seed) {
  const auto& p = spec.params;
  const auto& k = spec.kind;
  using Ladder = std::vector<std::int64_t>;
  if (k == "renewal_mass_ratio")
    return check_renewal_mass_ratio(law, param<Ladder>(p, "ladder"), SequenceRule::parse(param<std::string>(p, "y_rule")));
  if (k == "killed_mass_ratio")
    return check_killed_mass_ratio(law, param<Ladder>(p, "ladder"), param<std::int64_t>(p, "x"),
                                   SequenceRule::parse(param<std::string>(p, "y_rule")));
  if (k == "renewal_product")
    return check_renewal_product(law, param<Ladder>(p, "ladder"),
                                 SequenceRule::parse(param<std::string>(p, "x_rule")),
                                 SequenceRule::parse(param<std::string>(p, "y_rule")));
  if (k == "conditioned_mass_ratio")
    return check_conditioned_mass_ratio(law, param<Ladder>(p, "ladder"), param<std::int64_t>(p, "x"),
                                        param<std::int64_t>(p, "y"));
  if (k == "killed_density_scaling")
    return check_killed_density_scaling(law, param<Ladder>(p, "ladder"), param<double>(p, "u"), param<double>(p, "v"));
  if (k == "wiener_hopf")
    return check_wiener_hopf(law, param<double>(p, "lambda"), param<std::int64_t>(p, "n_max"));
  if (k == "pi_limit") return check_pi_limit(law, param<Ladder>(p, "ladder"));
  if (k == "survival_ratio") return check_survival_ratio(law, param<Ladder>(p, "ladder"), param<Ladder>(p, "x"));
  if (k == "ladder_tail_index") return check_ladder_tail_index(law, param<Ladder>(p, "ladder"));
  if (k == "fdd_convergence") {
    FddOptions opt;
    opt.n = param<std::int64_t>(p, "n");
    opt.x = param<std::int64_t>(p, "x");
    opt.y = param<std::int64_t>(p, "y");
    opt.times = param<std::vector<double>>(p, "times");
    opt.samples = param<std::int64_t>(p, "samples");
    opt.seed = seed;
    return check_fdd_convergence(law, opt);
  }
  if (k == "fdd_exact_l1")
    return check_fdd_exact_l1(law, param<Ladder>(p, "ladder"), param<std::int64_t>(p, "x"), param<std::int64_t>(p, "y"),
                              param<std::vector<double>>(p, "times"));
  if (k == "bridge_sampler")
    return check_bridge_sampler(law, param<std::int64_t>(p, "n"), param<std::int64_t>(p, "x"),
                                param<std::int64_t>(p, "y"), param<std::int64_t>(p, "samples"), seed);
  if (k == "harmonicity") return check_harmonicity(law, param<std::int64_t>(p, "x_max"));
  if (k == "duality") return check_duality(law, param<std::int64_t>(p, "n_max"), param<std::int64_t>(p, "x_max"));
  if (k == "polymer_eps0") return check_polymer_eps0(law, param<std::int64_t>(p, "N"), param<std::int64_t>(p, "a"));
  if (k == "polymer_contacts")
    return check_polymer_contacts(law, param<std::int64_t>(p, "N"), param<std::int64_t>(p, "a"), param<double>(p, "eps"));
  if (k == "polymer_decoupling") {
    PolymerParams pp = make_polymer_params(law, param<std::int64_t>(p, "N"), param<std::int64_t>(p, "a"),
                                           param<double>(p, "eps"));
    return decoupling_check(law, pp);
  }
  throw ConfigError("unknown check kind '" + k + "'");
}

}  // namespace

std::vector<std::string> check_kinds() { return kKinds; }

CheckSpec default_check(const std::string& kind, const std::string& law, std::int64_t n_max, std::int64_t samples) {
  CheckSpec s;
  s.kind = kind;
  s.law = law;
  s.id = kind + "/" + law;
  const auto ladder = ladder_for(n_max);
  const std::vector<double> times{0.25, 0.5, 0.75};
  if (kind == "renewal_mass_ratio")
    s.params = {{"ladder", ladder}, {"y_rule", "const:1"}};
  else if (kind == "killed_mass_ratio")
    s.params = {{"ladder", ladder}, {"x", 1}, {"y_rule", "const:1"}};
  else if (kind == "renewal_product")
    s.params = {{"ladder", ladder}, {"x_rule", "prop:0.25"}, {"y_rule", "prop:0.25"}};
  else if (kind == "conditioned_mass_ratio")
    s.params = {{"ladder", ladder}, {"x", 2}, {"y", 1}};
  else if (kind == "killed_density_scaling")
    s.params = {{"ladder", ladder}, {"u", 1.0}, {"v", 1.0}};
  else if (kind == "wiener_hopf")
    s.params = {{"lambda", 1.0}, {"n_max", 10000}};
  else if (kind == "pi_limit" || kind == "ladder_tail_index")
    s.params = {{"ladder", ladder}};
  else if (kind == "survival_ratio")
    s.params = {{"ladder", ladder}, {"x", std::vector<std::int64_t>{0, 1, 2, 3, 5}}};
  else if (kind == "fdd_convergence")
    s.params = {{"n", std::min<std::int64_t>(1024, n_max)}, {"x", 1}, {"y", 1}, {"times", times}, {"samples", samples}};
  else if (kind == "fdd_exact_l1")
    s.params = {{"ladder", ladder}, {"x", 1}, {"y", 1}, {"times", times}};
  else if (kind == "bridge_sampler")
    s.params = {{"n", 16}, {"x", 1}, {"y", 1}, {"samples", std::min<std::int64_t>(samples, 100000)}};
  else if (kind == "harmonicity")
    s.params = {{"x_max", 200}};
  else if (kind == "duality")
    s.params = {{"n_max", 12}, {"x_max", 12}};
  else if (kind == "polymer_eps0")
    s.params = {{"N", 64}, {"a", 1}};
  else if (kind == "polymer_contacts")
    s.params = {{"N", 64}, {"a", 1}, {"eps", 0.5}};
  else if (kind == "polymer_decoupling")
    s.params = {{"N", 6}, {"a", 0}, {"eps", 0.5}};
  else
    throw ConfigError("unknown check kind '" + kind + "'");
  return s;
}

SuiteConfig default_suite_config(std::uint64_t master_seed) {
  SuiteConfig c;
  c.master_seed = master_seed;
  for (const std::string law : {"lazy_srw", "three_point"}) {
    auto add = [&](CheckSpec s, const std::string& suffix = "") {
      if (!suffix.empty()) s.id += "/" + suffix;
      c.checks.push_back(std::move(s));
    };
    add(default_check("harmonicity", law));
    add(default_check("duality", law));
    add(default_check("renewal_mass_ratio", law), "y=const:1");
    auto s = default_check("renewal_mass_ratio", law);
    s.params["y_rule"] = "prop:0.5";
    add(s, "y=prop:0.5");
    add(default_check("killed_mass_ratio", law), "x=1,y=const:1");
    s = default_check("killed_mass_ratio", law);
    s.params["y_rule"] = "prop:0.25";
    add(s, "x=1,y=prop:0.25");
    add(default_check("renewal_product", law));
    add(default_check("conditioned_mass_ratio", law));
    add(default_check("killed_density_scaling", law));
    for (double lambda : {0.5, 1.0}) {
      s = default_check("wiener_hopf", law);
      s.params["lambda"] = lambda;
      add(s, lambda == 0.5 ? "lambda=0.5" : "lambda=1");
    }
    add(default_check("pi_limit", law));
    add(default_check("survival_ratio", law));
    add(default_check("ladder_tail_index", law));
    if (law == "lazy_srw") {
      add(default_check("fdd_convergence", law));
      add(default_check("fdd_exact_l1", law));
    }
    add(default_check("bridge_sampler", law));
    add(default_check("polymer_eps0", law));
    add(default_check("polymer_contacts", law));
    s = default_check("polymer_decoupling", law);
    s.params["N"] = 4;
    add(s, "N=4,a=0");
    s = default_check("polymer_decoupling", law);
    s.params["a"] = 1;
    add(s, "N=6,a=1");
  }
  return c;
}

VerificationReport run_check(const CheckSpec& spec, std::uint64_t master_seed) {
  const std::uint64_t seed = RandomState::derive_seed(master_seed, spec.id);
  VerificationReport r;
  try {
    const StepLaw law = resolve_step_law(spec.law);
    r = dispatch(spec, law, seed);
  } catch (const std::exception& e) {
    r = VerificationReport{};
    r.kind = spec.kind;
    r.law = spec.law;
    r.parameters = spec.params;
    r.status = CheckStatus::error;
    r.notes.push_back(e.what());
  }
  r.check_id = spec.id;
  if (is_monte_carlo(spec.kind)) r.seed = seed;
  return r;
}

SuiteResult run_suite(const SuiteConfig& config) {
  SuiteResult out;
  out.reports.resize(config.checks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < config.checks.size(); i = next++)
      out.reports[i] = run_check(config.checks[i], config.master_seed);
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(config.checks.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < out.reports.size(); ++i) {
    const auto& r = out.reports[i];
    const bool ok = r.status == CheckStatus::pass ||
                    (r.status == CheckStatus::inconclusive && config.checks[i].expected_inconclusive);
    if (!ok) out.aggregate_pass = false;
  }
  return out;
}

nlohmann::json suite_to_json(const SuiteConfig& config, const SuiteResult& result) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : result.reports) reports.push_back(to_json(r));
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : config.checks)
    checks.push_back({{"id", c.id}, {"kind", c.kind}, {"law", c.law}, {"params", c.params},
                      {"expected_inconclusive", c.expected_inconclusive}});
  return {{"schema_version", kSchemaVersion},
          {"master_seed", config.master_seed},
          {"aggregate_pass", result.aggregate_pass},
          {"checks", checks},
          {"reports", reports}};
}

}  // namespace rwlab
