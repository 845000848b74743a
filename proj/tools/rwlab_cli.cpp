// Command-line front end of the rwlab library.
#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rwlab/conditioned.hpp"
#include "rwlab/error.hpp"
#include "rwlab/excursion.hpp"
#include "rwlab/ladder.hpp"
#include "rwlab/path_io.hpp"
#include "rwlab/polymer.hpp"
#include "rwlab/random.hpp"
#include "rwlab/renewal_io.hpp"
#include "rwlab/schema.hpp"
#include "rwlab/suite.hpp"

namespace {

using namespace rwlab;

constexpr std::uint64_t kDefaultSeed = 20240917;

// Relative output paths land in $RWLAB_OUTPUT_DIR when it is set.
std::string output_path(const std::string& path) {
  const char* dir = std::getenv("RWLAB_OUTPUT_DIR");
  if (!dir || !*dir || std::filesystem::path(path).is_absolute()) return path;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / path).string();
}

unsigned default_workers() {
  if (const char* w = std::getenv("RWLAB_WORKERS"); w && *w) {
    try {
      const long v = std::stol(w);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("RWLAB_WORKERS must be a positive integer, got '") + w + "'");
  }
  return 1;
}

// Writes through `emit` to the file at `path`, or to stdout when empty.
template <class F>
void with_output(const std::string& path, F&& emit, std::ios::openmode mode = std::ios::out) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  const auto target = output_path(path);
  std::ofstream out(target, mode);
  if (!out) throw ConfigError("cannot open output file '" + target + "'");
  emit(out);
  if (!out) throw Error("failed writing '" + target + "'");
}

void csv_preamble(std::ostream& out, const StepLaw& law, std::uint64_t seed, const std::string& params) {
  out << "# schema=" << kSchemaVersion << "\n# law=" << law.name() << "\n# seed=" << seed << "\n# " << params << '\n';
}

struct Common {
  std::string law = "lazy_srw";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--law", c.law, "builtin law (lazy_srw, three_point) or law file")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_option("--out", c.out, "output file (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rwlab: random walks conditioned to stay non-negative"};
  app.require_subcommand(1);

  Common pmf_c, ladder_c, renewal_c, bridge_c, exc_c, verify_c, poly_c;

  auto* pmf = app.add_subcommand("pmf", "exact law of S_n (or of the killed walk)");
  add_common(pmf, pmf_c);
  std::int64_t pmf_n = 1, pmf_start = 0;
  bool pmf_killed = false;
  pmf->add_option("--n", pmf_n, "number of steps")->required();
  pmf->add_option("--start", pmf_start, "starting point")->capture_default_str();
  pmf->add_flag("--killed", pmf_killed, "kill the walk on entering (-inf, 0)");

  auto* ladder = app.add_subcommand("ladder", "first ladder epoch laws and ladder height laws");
  add_common(ladder, ladder_c);
  std::int64_t ladder_n = 64;
  ladder->add_option("--n-max", ladder_n, "largest epoch")->capture_default_str();

  auto* renewal = app.add_subcommand("renewal", "renewal functions V and U");
  add_common(renewal, renewal_c);
  std::int64_t renewal_x = 256, renewal_n = 1024;
  std::string renewal_format = "json";
  renewal->add_option("--x-max", renewal_x, "largest state")->capture_default_str();
  renewal->add_option("--n-max", renewal_n, "length of the epoch tail tables")->capture_default_str();
  renewal->add_option("--format", renewal_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto* bridge = app.add_subcommand("bridge", "exact samples of the conditioned bridge");
  add_common(bridge, bridge_c);
  std::int64_t bridge_x = 1, bridge_y = 1, bridge_n = 64, bridge_samples = 10;
  std::string bridge_format = "csv";
  bridge->add_option("--x", bridge_x, "start")->capture_default_str();
  bridge->add_option("--y", bridge_y, "end")->capture_default_str();
  bridge->add_option("--n", bridge_n, "length")->capture_default_str();
  bridge->add_option("--samples", bridge_samples, "number of paths")->capture_default_str();
  bridge->add_option("--format", bridge_format, "csv or binary")
      ->check(CLI::IsMember({"csv", "binary"}))
      ->capture_default_str();

  auto* exc = app.add_subcommand("excursion", "Brownian excursion marginal density and CDF");
  add_common(exc, exc_c);
  std::vector<double> exc_t{0.5};
  double exc_xmax = 3.0;
  std::int64_t exc_points = 61;
  exc->add_option("--t", exc_t, "times in (0, 1)")->capture_default_str();
  exc->add_option("--x-max", exc_xmax, "largest abscissa")->capture_default_str();
  exc->add_option("--points", exc_points, "grid points per time")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run verification checks");
  add_common(verify, verify_c);
  std::vector<std::string> verify_laws, verify_checks;
  std::int64_t verify_nmax = 4096, verify_samples = 200000;
  std::string verify_csv;
  unsigned verify_workers = 0;
  verify->add_option("--checks", verify_checks, "check kinds (comma separated); default: the full suite")
      ->delimiter(',');
  verify->add_option("--n-max", verify_nmax, "largest n of the ladder {n/16, n/4, n}")->capture_default_str();
  verify->add_option("--samples", verify_samples, "Monte Carlo sample size")->capture_default_str();
  verify->add_option("--csv", verify_csv, "also write flat CSV rows here");
  verify->add_option("--workers", verify_workers, "worker threads (default $RWLAB_WORKERS or 1)");

  auto* poly = app.add_subcommand("polymer", "stripe pinning polymer");
  add_common(poly, poly_c);
  std::int64_t poly_N = 64, poly_a = 0, poly_samples = 1000;
  double poly_eps = 0.0;
  std::string poly_paths;
  poly->add_option("--N", poly_N, "length")->capture_default_str();
  poly->add_option("--a", poly_a, "stripe width")->capture_default_str();
  poly->add_option("--eps", poly_eps, "pinning strength")->capture_default_str();
  poly->add_option("--samples", poly_samples, "number of sampled paths")->capture_default_str();
  poly->add_option("--paths", poly_paths, "write sampled paths as CSV here");

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  // --law on verify is optional and repeatable; read it back from the option.
  if (verify->parsed()) verify_laws = verify->get_option("--law")->count() ? std::vector<std::string>{verify_c.law}
                                                                           : std::vector<std::string>{};

  try {
    if (pmf->parsed()) {
      const auto law = resolve_step_law(pmf_c.law);
      const auto row = pmf_killed ? killed_row(law, pmf_start, pmf_n) : [&] {
        auto r = walk_pmf(law, pmf_n);
        LatticeRow shifted(r.lo() + pmf_start, std::vector<double>(r.masses().begin(), r.masses().end()));
        return shifted;
      }();
      with_output(pmf_c.out, [&](std::ostream& out) {
        std::ostringstream params;
        params << "n=" << pmf_n << " start=" << pmf_start << " killed=" << (pmf_killed ? 1 : 0);
        csv_preamble(out, law, pmf_c.seed, params.str());
        out.precision(17);
        out << "position,probability\n";
        for (auto z = row.lo(); z <= row.hi(); ++z)
          if (row.at(z) > 0.0) out << z << ',' << row.at(z) << '\n';
      });
      return 0;
    }
    if (ladder->parsed()) {
      const auto law = resolve_step_law(ladder_c.law);
      const auto fl = first_ladder_laws(law, ladder_n);
      const auto heights = ladder_height_laws(law);
      const auto tail_minus = survival_curve(law, 0, ladder_n);
      const auto tail_plus = weak_ascending_tail(law, ladder_n);
      with_output(ladder_c.out, [&](std::ostream& out) {
        csv_preamble(out, law, ladder_c.seed, "n_max=" + std::to_string(ladder_n));
        out.precision(17);
        out << "# height law: h,P[H-=h],P[H+=h]\n";
        const auto hmax = std::max(heights.h_minus.size(), heights.h_plus.size());
        for (std::size_t h = 0; h < hmax; ++h)
          out << "# " << h << ',' << (h < heights.h_minus.size() ? heights.h_minus[h] : 0.0) << ','
              << (h < heights.h_plus.size() ? heights.h_plus[h] : 0.0) << '\n';
        out << "n,P_T_minus_eq_n,P_T_plus_eq_n,P_T_minus_gt_n,P_T_plus_gt_n\n";
        for (std::int64_t n = 0; n <= ladder_n; ++n) {
          const auto i = static_cast<std::size_t>(n);
          out << n << ',' << fl.t_minus[i] << ',' << fl.t_plus[i] << ',' << tail_minus[i] << ',' << tail_plus[i]
              << '\n';
        }
      });
      return 0;
    }
    if (renewal->parsed()) {
      const auto law = resolve_step_law(renewal_c.law);
      const auto table = build_renewal_table(law, renewal_x, renewal_n);
      with_output(renewal_c.out, [&](std::ostream& out) {
        if (renewal_format == "json") {
          auto j = renewal_to_json(table);
          j["seed"] = renewal_c.seed;
          out << j.dump(1) << '\n';
          return;
        }
        csv_preamble(out, law, renewal_c.seed, "x_max=" + std::to_string(renewal_x) + " n_max=" + std::to_string(renewal_n));
        out.precision(17);
        out << "x,V,U\n";
        for (std::int64_t x = 0; x <= renewal_x; ++x)
          out << x << ',' << table.V[static_cast<std::size_t>(x)] << ',' << table.U[static_cast<std::size_t>(x)] << '\n';
      });
      return 0;
    }
    if (bridge->parsed()) {
      const auto law = resolve_step_law(bridge_c.law);
      if (bridge_samples < 0) throw ConfigError("--samples must be >= 0");
      const auto table = bridge_table(law, bridge_x, bridge_y, bridge_n);
      RandomState rng(bridge_c.seed);
      std::vector<LatticePath> paths;
      for (std::int64_t s = 0; s < bridge_samples; ++s) paths.push_back(sample_bridge(table, rng));
      nlohmann::json meta = {{"schema_version", kSchemaVersion}, {"law", law_to_json(law)}, {"x", bridge_x},
                             {"y", bridge_y}, {"n", bridge_n}, {"samples", bridge_samples}, {"seed", bridge_c.seed},
                             {"normalizer", table.normalizer}};
      if (bridge_format == "csv") {
        with_output(bridge_c.out, [&](std::ostream& out) {
          out << "# " << meta.dump() << '\n';
          write_paths_csv(out, paths);
        });
      } else {
        if (bridge_c.out.empty()) throw ConfigError("--format binary needs --out");
        with_output(bridge_c.out, [&](std::ostream& out) {
          for (const auto& p : paths) write_path_frame(out, p);
        }, std::ios::out | std::ios::binary);
        with_output(bridge_c.out + ".json", [&](std::ostream& out) { out << meta.dump(1) << '\n'; });
      }
      return 0;
    }
    if (exc->parsed()) {
      if (exc_points < 2) throw ConfigError("--points must be >= 2");
      if (!(exc_xmax > 0.0)) throw ConfigError("--x-max must be > 0");
      with_output(exc_c.out, [&](std::ostream& out) {
        out << "# schema=" << kSchemaVersion << "\n# seed=" << exc_c.seed << "\n# x_max=" << exc_xmax
            << " points=" << exc_points << '\n';
        out.precision(17);
        out << "t,x,density,cdf\n";
        for (double t : exc_t)
          for (std::int64_t i = 0; i < exc_points; ++i) {
            const double x = exc_xmax * static_cast<double>(i) / static_cast<double>(exc_points - 1);
            out << t << ',' << x << ',' << excursion::marginal_density(t, x) << ',' << excursion::marginal_cdf(t, x)
                << '\n';
          }
      });
      return 0;
    }
    if (verify->parsed()) {
      SuiteConfig config;
      if (verify_checks.empty() && verify_laws.empty() && verify_nmax == 4096 && verify_samples == 200000) {
        config = default_suite_config(verify_c.seed);
      } else {
        config.master_seed = verify_c.seed;
        const auto laws = verify_laws.empty() ? std::vector<std::string>{"lazy_srw", "three_point"} : verify_laws;
        const auto kinds = verify_checks.empty() ? check_kinds() : verify_checks;
        for (const auto& law : laws) {
          resolve_step_law(law);
          for (const auto& k : kinds) config.checks.push_back(default_check(k, law, verify_nmax, verify_samples));
        }
      }
      config.workers = verify_workers ? verify_workers : default_workers();
      const auto result = run_suite(config);
      const auto j = suite_to_json(config, result);
      with_output(verify_c.out, [&](std::ostream& out) { out << j.dump(1) << '\n'; });
      if (!verify_csv.empty())
        with_output(verify_csv, [&](std::ostream& out) {
          out << reports_csv_header() << "# seed=" << config.master_seed << '\n';
          for (const auto& r : result.reports) out << report_csv_rows(r);
        });
      for (const auto& r : result.reports)
        std::cerr << to_string(r.status) << ' ' << r.check_id << '\n';
      return result.aggregate_pass ? 0 : 1;
    }
    if (poly->parsed()) {
      const auto law = resolve_step_law(poly_c.law);
      if (poly_samples < 0) throw ConfigError("--samples must be >= 0");
      const auto params = make_polymer_params(law, poly_N, poly_a, poly_eps);
      const auto pf = partition_function_detail(law, params);
      const auto table = polymer_table(law, params);
      RandomState rng(poly_c.seed);
      std::vector<LatticePath> paths;
      double sum = 0.0, sum2 = 0.0;
      for (std::int64_t s = 0; s < poly_samples; ++s) {
        auto path = sample_polymer(table, rng);
        const auto c = static_cast<double>(count_contacts(path, poly_a));
        sum += c;
        sum2 += c * c;
        if (!poly_paths.empty()) paths.push_back(std::move(path));
      }
      const double m = poly_samples ? sum / static_cast<double>(poly_samples) : 0.0;
      const double var = poly_samples > 1 ? (sum2 - sum * m) / static_cast<double>(poly_samples - 1) : 0.0;
      nlohmann::json j = {{"schema_version", kSchemaVersion},
                          {"law", law_to_json(law)},
                          {"seed", poly_c.seed},
                          {"params", {{"N", params.N}, {"a", params.a}, {"eps", params.eps}, {"window", params.window}}},
                          {"Z", pf.Z},
                          {"relative_bias_bound", pf.relative_bias_bound},
                          {"expected_contacts", expected_contacts(table)},
                          {"dlogZ_deps", log_partition_derivative(law, params)},
                          {"samples", poly_samples},
                          {"sample_mean_contacts", m},
                          {"sample_sd_contacts", std::sqrt(std::max(var, 0.0))}};
      with_output(poly_c.out, [&](std::ostream& out) { out << j.dump(1) << '\n'; });
      if (!poly_paths.empty())
        with_output(poly_paths, [&](std::ostream& out) {
          out << "# " << nlohmann::json({{"law", law.name()}, {"seed", poly_c.seed}}).dump() << '\n';
          write_paths_csv(out, paths);
        });
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "rwlab: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rwlab: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
