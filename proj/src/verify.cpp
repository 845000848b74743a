#include "rwlab/verify.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "rwlab/conditioned.hpp"
#include "rwlab/error.hpp"
#include "rwlab/excursion.hpp"
#include "rwlab/ladder.hpp"
#include "rwlab/polymer.hpp"
#include "rwlab/schema.hpp"

namespace rwlab {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::error: return "error";
    case CheckStatus::skipped: return "skipped";
  }
  return "error";
}

CheckStatus check_status_from_string(std::string_view s) {
  for (auto c : {CheckStatus::pass, CheckStatus::fail, CheckStatus::inconclusive, CheckStatus::error,
                 CheckStatus::skipped})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown check status '" + std::string(s) + "'");
}

namespace {

// Entries grouped by series, each sorted by n.
std::map<std::string, std::vector<const ComputedValue*>> by_series(const VerificationReport& r) {
  std::map<std::string, std::vector<const ComputedValue*>> out;
  for (const auto& c : r.computed) out[c.series].push_back(&c);
  for (auto& [_, v] : out)
    std::stable_sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->n < b->n; });
  return out;
}

}  // namespace

double VerificationReport::final_error() const {
  double worst = 0.0;
  for (const auto& [_, v] : by_series(*this)) {
    const double e = std::abs(v.back()->value - reference);
    if (std::isnan(e)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, e);
  }
  return worst;
}

void evaluate_report(VerificationReport& r) {
  if (r.computed.empty()) {
    if (r.status != CheckStatus::skipped) {
      r.status = CheckStatus::error;
      r.notes.push_back("no computed values");
    }
    return;
  }
  r.trend_ok = true;
  for (const auto& [_, v] : by_series(r)) {
    if (v.size() < 2) continue;
    const auto* last = v[v.size() - 1];
    const auto* prev = v[v.size() - 2];
    if (last->n == prev->n) continue;
    if (std::abs(last->value - r.reference) > std::abs(prev->value - r.reference)) r.trend_ok = false;
  }
  if (!(r.final_error() <= r.tolerance))
    r.status = CheckStatus::fail;
  else if (!r.trend_ok)
    r.status = CheckStatus::inconclusive;
  else
    r.status = CheckStatus::pass;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json computed = nlohmann::json::array();
  for (const auto& c : r.computed)
    computed.push_back({{"n", c.n}, {"series", c.series}, {"value", c.value}, {"detail", c.detail}});
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"check_id", r.check_id},
                      {"kind", r.kind},
                      {"law", r.law},
                      {"parameters", r.parameters},
                      {"computed", computed},
                      {"reference", r.reference},
                      {"tolerance", r.tolerance},
                      {"final_error", r.computed.empty() ? nlohmann::json() : nlohmann::json(r.final_error())},
                      {"trend_ok", r.trend_ok},
                      {"status", to_string(r.status)},
                      {"pass", r.pass()},
                      {"diagnostics", r.diagnostics},
                      {"notes", r.notes}};
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

VerificationReport report_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", "") != kSchemaVersion)
    throw ConfigError("report: unsupported schema_version '" + j.value("schema_version", "") + "'");
  VerificationReport r;
  r.check_id = j.at("check_id").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.law = j.at("law").get<std::string>();
  r.parameters = j.at("parameters");
  for (const auto& c : j.at("computed")) {
    ComputedValue v;
    v.n = c.at("n").get<std::int64_t>();
    v.series = c.at("series").get<std::string>();
    v.value = c.at("value").is_null() ? std::numeric_limits<double>::quiet_NaN() : c.at("value").get<double>();
    v.detail = c.at("detail");
    r.computed.push_back(std::move(v));
  }
  r.reference = j.at("reference").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.trend_ok = j.at("trend_ok").get<bool>();
  r.status = check_status_from_string(j.at("status").get<std::string>());
  if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  r.diagnostics = j.at("diagnostics");
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

std::string reports_csv_header() {
  return "# schema=" + std::string(kSchemaVersion) + "\ncheck_id,kind,law,status,series,n,value,reference,tolerance\n";
}

std::string report_csv_rows(const VerificationReport& r) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& c : r.computed)
    out << r.check_id << ',' << r.kind << ',' << r.law << ',' << to_string(r.status) << ',' << c.series << ','
        << c.n << ',' << c.value << ',' << r.reference << ',' << r.tolerance << '\n';
  return out.str();
}

SequenceRule SequenceRule::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("sequence rule '" + std::string(text) + "': expected kind:value");
  const auto kind = text.substr(0, colon);
  const std::string value(text.substr(colon + 1));
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("sequence rule '" + std::string(text) + "': bad number");
  }
  if (v < 0.0) throw ConfigError("sequence rule '" + std::string(text) + "': value must be >= 0");
  if (kind == "const") {
    if (v != std::floor(v)) throw ConfigError("sequence rule '" + std::string(text) + "': constant must be an integer");
    return constant(static_cast<std::int64_t>(v));
  }
  if (kind == "prop") return proportional(v);
  throw ConfigError("sequence rule '" + std::string(text) + "': kind must be const or prop");
}

std::string SequenceRule::describe() const {
  std::ostringstream out;
  if (kind == Kind::constant)
    out << "const:" << static_cast<std::int64_t>(value);
  else
    out << "prop:" << value;
  return out.str();
}

std::int64_t SequenceRule::at(double a_n) const {
  if (kind == Kind::constant) return static_cast<std::int64_t>(value);
  return static_cast<std::int64_t>(std::floor(value * a_n));
}

std::vector<std::int64_t> default_ladder() { return {1 << 8, 1 << 10, 1 << 12}; }

namespace {

VerificationReport make_report(const std::string& kind, const StepLaw& law, nlohmann::json params, double reference,
                               double tolerance) {
  VerificationReport r;
  r.kind = kind;
  r.check_id = kind + "/" + law.name();
  r.law = law.name();
  r.parameters = std::move(params);
  r.reference = reference;
  r.tolerance = tolerance;
  return r;
}

void require_ladder(const std::vector<std::int64_t>& ladder, const char* op) {
  if (ladder.empty()) throw ConfigError(std::string(op) + ": n-ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) throw ConfigError(std::string(op) + ": ladder entries must be >= 1");
    if (i > 0 && ladder[i] <= ladder[i - 1]) throw ConfigError(std::string(op) + ": ladder must be increasing");
  }
}

// Renewal table covering states up to `need`.
std::shared_ptr<const RenewalTable> renewal_for(const StepLaw& law, std::int64_t need) {
  std::int64_t x_max = 256;
  while (x_max < need + law.max_up() + law.max_down()) x_max *= 2;
  return cached_renewal_table(law, x_max, 16);
}

double at(const std::vector<double>& v, std::int64_t i) { return v.at(static_cast<std::size_t>(i)); }

std::int64_t max_rule(const StepLaw& law, const std::vector<std::int64_t>& ladder, const SequenceRule& rule) {
  std::int64_t m = 0;
  for (auto n : ladder) m = std::max(m, rule.at(norming(law, n)));
  return m;
}

void note_unreachable(VerificationReport& r, std::int64_t n, const std::string& what) {
  r.notes.push_back("n = " + std::to_string(n) + ": " + what + " unreachable, point skipped");
}

std::vector<double> sign_free_zero_mass(const StepLaw& law, std::int64_t n_max) {
  std::vector<double> out(static_cast<std::size_t>(n_max + 1), 0.0);
  LatticeRow row = LatticeRow::point_mass(0);
  out[0] = 1.0;
  for (std::int64_t m = 1; m <= n_max; ++m) {
    row = advance(row, law);
    out[static_cast<std::size_t>(m)] = row.at(0);
  }
  return out;
}

}  // namespace

VerificationReport check_renewal_mass_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder, SequenceRule y) {
  require_ladder(ladder, "check_renewal_mass_ratio");
  auto r = make_report("renewal_mass_ratio", law, {{"ladder", ladder}, {"y_rule", y.describe()}}, 1.0, 0.1);
  const auto table = renewal_for(law, max_rule(law, ladder, y));
  for (auto n : ladder) {
    const double a = norming(law, n);
    const auto yn = y.at(a);
    const double p = walk_pmf(law, n).at(yn);
    const double u = killed_row(law, 0, n).at(yn);
    if (!(p > 0.0) || !(u > 0.0)) {
      note_unreachable(r, n, "y = " + std::to_string(yn));
      continue;
    }
    const double U = at(table->U, yn);
    r.computed.push_back({n, "", u * static_cast<double>(n) / (U * p),
                          {{"y", yn}, {"u_mass", u}, {"U_y", U}, {"walk_mass", p}}});
  }
  evaluate_report(r);
  return r;
}

VerificationReport check_killed_mass_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder, std::int64_t x,
                                           SequenceRule y) {
  require_ladder(ladder, "check_killed_mass_ratio");
  if (x < 0) throw ConfigError("check_killed_mass_ratio: x must be >= 0");
  auto r = make_report("killed_mass_ratio", law, {{"ladder", ladder}, {"x", x}, {"y_rule", y.describe()}}, 1.0, 0.1);
  const auto table = renewal_for(law, std::max(x, max_rule(law, ladder, y)));
  for (auto n : ladder) {
    const double a = norming(law, n);
    const auto yn = y.at(a);
    const double p = walk_pmf(law, n).at(yn);
    const double lhs = killed_row(law, x, n).at(yn);
    if (!(p > 0.0) || !(lhs > 0.0)) {
      note_unreachable(r, n, "y = " + std::to_string(yn));
      continue;
    }
    const double V = at(table->V, x), U = at(table->U, yn);
    r.computed.push_back({n, "", lhs / (V * U / static_cast<double>(n) * p),
                          {{"y", yn}, {"killed_mass", lhs}, {"V_x", V}, {"U_y", U}, {"walk_mass", p}}});
  }
  evaluate_report(r);
  return r;
}

VerificationReport check_renewal_product(const StepLaw& law, const std::vector<std::int64_t>& ladder, SequenceRule x,
                                         SequenceRule y) {
  require_ladder(ladder, "check_renewal_product");
  auto r = make_report("renewal_product", law, {{"ladder", ladder}, {"x_rule", x.describe()}, {"y_rule", y.describe()}},
                       0.0, 0.05);
  const auto table = renewal_for(law, std::max(max_rule(law, ladder, x), max_rule(law, ladder, y)));
  for (auto n : ladder) {
    const double a = norming(law, n);
    const auto xn = x.at(a), yn = y.at(a);
    const double lhs = at(table->U, xn) * at(table->V, yn) / static_cast<double>(n);
    const double rhs = 2.0 * static_cast<double>(xn) * static_cast<double>(yn) / (a * a);
    r.computed.push_back({n, "", std::abs(lhs - rhs), {{"x", xn}, {"y", yn}, {"UV_over_n", lhs}, {"two_xy_over_a2", rhs}}});
  }
  evaluate_report(r);
  return r;
}

VerificationReport check_conditioned_mass_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder, std::int64_t x,
                                                std::int64_t y) {
  require_ladder(ladder, "check_conditioned_mass_ratio");
  if (x < 0 || y < 0) throw ConfigError("check_conditioned_mass_ratio: x and y must be >= 0");
  auto r = make_report("conditioned_mass_ratio", law, {{"ladder", ladder}, {"x", x}, {"y", y}}, 1.0, 0.1);
  const auto table = renewal_for(law, std::max(x, y));
  const double Vx = at(table->V, x), Vy = at(table->V, y), Uy = at(table->U, y);
  for (auto n : ladder) {
    const double a = norming(law, n);
    const double killed = killed_row(law, x, n).at(y);
    if (!(killed > 0.0)) {
      note_unreachable(r, n, "y = " + std::to_string(y));
      continue;
    }
    const double lhs = Vy / Vx * killed;
    const double rhs = 2.0 * static_cast<double>(y * y) / (a * a) * std_normal_pdf(static_cast<double>(x) / a) / a;
    r.computed.push_back({n, "", lhs / rhs, {{"killed_mass", killed}, {"lhs", lhs}, {"rhs", rhs}}});
  }
  // With x, y fixed the left side behaves like V(y) U(y)/n * phi(x/a_n)/a_n, so
  // the ratio tends to this constant rather than to 1.
  if (y > 0) r.diagnostics["fixed_endpoint_limit"] = Vy * Uy * law.sigma2() / (2.0 * static_cast<double>(y * y));
  evaluate_report(r);
  return r;
}

VerificationReport check_killed_density_scaling(const StepLaw& law, const std::vector<std::int64_t>& ladder, double u, double v) {
  require_ladder(ladder, "check_killed_density_scaling");
  if (!(u > 0.0) || !(v > 0.0)) throw ConfigError("check_killed_density_scaling: u and v must be > 0");
  const double ref = excursion::r_kernel(u, v);
  auto r = make_report("killed_density_scaling", law, {{"ladder", ladder}, {"u", u}, {"v", v}}, ref, 0.1 * ref);
  for (auto n : ladder) {
    const double a = norming(law, n);
    const auto xn = static_cast<std::int64_t>(std::floor(u * a));
    const auto yn = static_cast<std::int64_t>(std::floor(v * a));
    const double mass = killed_row(law, xn, n).at(yn);
    const double xr = static_cast<double>(xn) / a, yr = static_cast<double>(yn) / a;
    const double rounded = excursion::r_kernel(xr, yr);
    r.computed.push_back({n, "", a * mass,
                          {{"x", xn}, {"y", yn}, {"x_over_a", xr}, {"y_over_a", yr}, {"r_at_rounded", rounded},
                           {"error_vs_r_at_rounded", std::abs(a * mass - rounded)}}});
  }
  evaluate_report(r);
  return r;
}

VerificationReport check_wiener_hopf(const StepLaw& law, double lambda, std::int64_t n_max) {
  if (!(lambda > 0.0)) throw ConfigError("check_wiener_hopf: lambda must be > 0");
  if (n_max < 1) throw ConfigError("check_wiener_hopf: n_max must be >= 1");
  auto r = make_report("wiener_hopf", law, {{"lambda", lambda}, {"n_max", n_max}}, -std::expm1(-lambda), 1e-6);

  const auto fl = first_ladder_laws(law, n_max);
  double e_minus = 0.0, e_plus = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double w = std::exp(-lambda * static_cast<double>(n));
    e_minus += w * fl.t_minus[static_cast<std::size_t>(n)];
    e_plus += w * fl.t_plus[static_cast<std::size_t>(n)];
  }
  const double cut = std::exp(-lambda * static_cast<double>(n_max + 1));
  const double lhs_bound = cut * std::max(fl.tail_minus, fl.tail_plus);

  // Sign probabilities; terms vanish in double precision once e^{-lambda n}
  // underflows, so the loop stops there.
  double s_minus = 0.0, s_plus = 0.0;
  LatticeRow row = LatticeRow::point_mass(0);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double w = std::exp(-lambda * static_cast<double>(n)) / static_cast<double>(n);
    if (w == 0.0) break;
    row = advance(row, law);
    double neg = 0.0;
    for (auto z = row.lo(); z < 0 && z <= row.hi(); ++z) neg += row.at(z);
    s_minus += w * neg;
    s_plus += w * (1.0 - neg);
  }
  const double rhs_minus = std::exp(-s_minus), rhs_plus = std::exp(-s_plus);
  const double rhs_bound = cut / (static_cast<double>(n_max + 1) * -std::expm1(-lambda));
  const double lhs_minus = 1.0 - e_minus, lhs_plus = 1.0 - e_plus;

  r.computed.push_back({n_max, "", lhs_minus * lhs_plus,
                        {{"lhs_minus", lhs_minus}, {"lhs_plus", lhs_plus}, {"rhs_minus", rhs_minus},
                         {"rhs_plus", rhs_plus}}});
  r.diagnostics = {{"minus_identity_error", std::abs(lhs_minus - rhs_minus)},
                   {"plus_identity_error", std::abs(lhs_plus - rhs_plus)},
                   {"lhs_truncation_bound", lhs_bound},
                   {"rhs_truncation_bound", rhs_bound}};
  evaluate_report(r);
  if (r.status == CheckStatus::pass &&
      (std::abs(lhs_minus - rhs_minus) > r.tolerance || std::abs(lhs_plus - rhs_plus) > r.tolerance)) {
    r.status = CheckStatus::fail;
    r.notes.push_back("product matches but an individual factor identity does not");
  }
  if (r.status == CheckStatus::pass && (lhs_bound >= r.tolerance || rhs_bound >= r.tolerance)) {
    r.status = CheckStatus::inconclusive;
    r.notes.push_back("truncation bound exceeds the tolerance; increase n_max");
  }
  return r;
}

VerificationReport check_pi_limit(const StepLaw& law, const std::vector<std::int64_t>& ladder) {
  require_ladder(ladder, "check_pi_limit");
  const double ref = 1.0 / std::numbers::pi;
  auto r = make_report("pi_limit", law, {{"ladder", ladder}}, ref, 0.05 * ref);
  const std::int64_t N = ladder.back();
  const auto strict_down = survival_curve(law, 0, N);     // P[S_1 >= 0, ..., S_n >= 0]
  const auto weak_up = weak_ascending_tail(law, N);        // P[S_1 < 0, ..., S_n < 0]
  const auto strict_up = survival_curve(law.reversed(), 0, N);  // P[S_1 <= 0, ..., S_n <= 0]
  nlohmann::json strict_pairing = nlohmann::json::array();
  for (auto n : ladder) {
    const double dn = static_cast<double>(n);
    const double a = strict_down[static_cast<std::size_t>(n)];
    const double b = weak_up[static_cast<std::size_t>(n)];
    const double c = strict_up[static_cast<std::size_t>(n)];
    r.computed.push_back({n, "", dn * a * b, {{"P_T_minus_gt_n", a}, {"P_T_plus_weak_gt_n", b}}});
    strict_pairing.push_back({{"n", n}, {"value", dn * a * c}, {"P_T_plus_strict_gt_n", c}});
  }
  // Pairing the strict descending epoch with the strict ascending one instead
  // changes the limit to exp(sum_m P[S_m = 0]/m)/pi.
  const auto zero = sign_free_zero_mass(law, N);
  double s = 0.0;
  for (std::int64_t m = 1; m <= N; ++m) s += zero[static_cast<std::size_t>(m)] / static_cast<double>(m);
  s += 2.0 / (law.sigma() * std::sqrt(2.0 * std::numbers::pi * static_cast<double>(N)));
  r.diagnostics = {{"strict_pairing", strict_pairing}, {"strict_pairing_limit", std::exp(s) * ref}};
  evaluate_report(r);
  return r;
}

VerificationReport check_survival_ratio(const StepLaw& law, const std::vector<std::int64_t>& ladder,
                                        const std::vector<std::int64_t>& xs) {
  require_ladder(ladder, "check_survival_ratio");
  if (xs.empty()) throw ConfigError("check_survival_ratio: x-list is empty");
  auto sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0) throw ConfigError("check_survival_ratio: x must be >= 0");
  auto r = make_report("survival_ratio", law, {{"ladder", ladder}, {"x", xs}}, 1.0, 0.1);
  const std::int64_t N = ladder.back();
  const auto table = renewal_for(law, sorted.back());
  const auto base = survival_curve(law, 0, N);
  std::map<std::int64_t, std::vector<double>> curves;
  for (auto x : sorted) curves[x] = survival_curve(law, x, N);
  for (auto x : xs) {
    const double V = at(table->V, x);
    for (auto n : ladder) {
      const double ratio = curves[x][static_cast<std::size_t>(n)] / base[static_cast<std::size_t>(n)];
      r.computed.push_back({n, "x=" + std::to_string(x), ratio / V, {{"x", x}, {"ratio", ratio}, {"V_x", V}}});
    }
  }
  bool monotone = true;
  for (auto n : ladder)
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (curves[sorted[i]][static_cast<std::size_t>(n)] < curves[sorted[i - 1]][static_cast<std::size_t>(n)])
        monotone = false;
  r.diagnostics["monotone_in_x"] = monotone;
  evaluate_report(r);
  if (!monotone && r.status == CheckStatus::pass) {
    r.status = CheckStatus::fail;
    r.notes.push_back("survival ratio decreases in x");
  }
  return r;
}

VerificationReport check_ladder_tail_index(const StepLaw& law, const std::vector<std::int64_t>& ladder) {
  require_ladder(ladder, "check_ladder_tail_index");
  auto r = make_report("ladder_tail_index", law, {{"ladder", ladder}}, std::numbers::sqrt2, 0.01);
  const auto tail = survival_curve(law, 0, 2 * ladder.back());
  for (auto n : ladder)
    r.computed.push_back(
        {n, "", tail[static_cast<std::size_t>(n)] / tail[static_cast<std::size_t>(2 * n)], nlohmann::json::object()});
  evaluate_report(r);
  return r;
}

namespace {

void require_times(const std::vector<double>& times, const char* op) {
  if (times.empty()) throw ConfigError(std::string(op) + ": time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0 && times[i] < 1.0)) throw ConfigError(std::string(op) + ": times must lie in (0, 1)");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError(std::string(op) + ": times must increase");
  }
}

std::string time_label(double t) {
  std::ostringstream out;
  out << "t=" << t;
  return out.str();
}

// sup_s |G(s) - F(s)| for a distribution G on the atoms z / a (weights sum to
// 1) against the continuous excursion CDF F at time t.
double lattice_ks(const std::map<std::int64_t, double>& weights, double t, double a) {
  double below = 0.0, worst = 0.0;
  for (const auto& [z, w] : weights) {
    const double F = z < 0 ? 0.0 : excursion::marginal_cdf(t, static_cast<double>(z) / a);
    worst = std::max(worst, std::abs(below - F));
    below += w;
    worst = std::max(worst, std::abs(below - F));
  }
  return worst;
}

std::map<std::int64_t, double> row_weights(const LatticeRow& row) {
  std::map<std::int64_t, double> out;
  for (auto z = row.lo(); z <= row.hi(); ++z)
    if (row.at(z) > 0.0) out[z] = row.at(z);
  return out;
}

std::int64_t grid_index(std::int64_t n, double t) { return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * t)); }

}  // namespace

VerificationReport check_fdd_convergence(const StepLaw& law, const FddOptions& opt) {
  require_times(opt.times, "check_fdd_convergence");
  if (opt.samples < 1) throw ConfigError("check_fdd_convergence: samples must be >= 1");
  if (opt.n < 2) throw ConfigError("check_fdd_convergence: n must be >= 2");
  auto r = make_report("fdd_convergence", law,
                       {{"n", opt.n}, {"x", opt.x}, {"y", opt.y}, {"times", opt.times}, {"samples", opt.samples}},
                       0.0, 0.015);
  r.seed = opt.seed;
  BridgeTable table = [&] {
    try {
      return bridge_table(law, opt.x, opt.y, opt.n);
    } catch (const UnreachableError&) {
      throw UnreachableError("check_fdd_convergence: P_x[killed walk at y after n steps] = 0; choose a y reachable "
                             "from x in n steps (check the parity of the law)");
    }
  }();
  const double a = norming(law, opt.n);
  std::vector<std::int64_t> index;
  for (double t : opt.times) index.push_back(grid_index(opt.n, t));
  std::vector<std::map<std::int64_t, double>> counts(opt.times.size());
  RandomState rng(opt.seed);
  for (std::int64_t s = 0; s < opt.samples; ++s) {
    const auto path = sample_bridge(table, rng);
    for (std::size_t k = 0; k < index.size(); ++k) counts[k][path.positions[static_cast<std::size_t>(index[k])]] += 1.0;
  }
  const double total = static_cast<double>(opt.samples);
  for (std::size_t k = 0; k < opt.times.size(); ++k) {
    for (auto& [_, c] : counts[k]) c /= total;
    const double ks = lattice_ks(counts[k], opt.times[k], a);
    const double exact_ks = lattice_ks(row_weights(bridge_marginal_exact(table, index[k])), opt.times[k], a);
    r.computed.push_back({opt.n, time_label(opt.times[k]), ks, {{"t", opt.times[k]}, {"exact_law_ks", exact_ks}}});
  }
  r.diagnostics = {{"noise_floor", 1.36 / std::sqrt(total)}, {"a_n", a}};
  evaluate_report(r);
  return r;
}

VerificationReport check_fdd_exact_l1(const StepLaw& law, const std::vector<std::int64_t>& ladder, std::int64_t x,
                                      std::int64_t y, const std::vector<double>& times) {
  require_ladder(ladder, "check_fdd_exact_l1");
  require_times(times, "check_fdd_exact_l1");
  auto r = make_report("fdd_exact_l1", law, {{"ladder", ladder}, {"x", x}, {"y", y}, {"times", times}}, 0.0, 0.02);
  excursion::QuadratureSettings q;
  for (auto n : ladder) {
    const double a = norming(law, n);
    for (double t : times) {
      const auto m = grid_index(n, t);
      if (m < 1 || m >= n) throw ConfigError("check_fdd_exact_l1: floor(n t) must lie in [1, n-1]");
      const auto row = bridge_marginal_exact(law, x, y, n, m);
      const double top = q.cutoff_sd * std::sqrt(t * (1.0 - t)) * a;
      const auto z_max = std::max(row.hi(), static_cast<std::int64_t>(std::ceil(top)) + 1);
      double l1 = 0.0;
      for (std::int64_t z = 0; z <= z_max; ++z) {
        const double cell = excursion::marginal_mass(t, (static_cast<double>(z) - 0.5) / a,
                                                     (static_cast<double>(z) + 0.5) / a, q);
        l1 += std::abs(row.at(z) - cell);
      }
      r.computed.push_back({n, time_label(t), l1, {{"t", t}, {"m", m}}});
    }
  }
  r.notes.push_back("cells are [(z - 1/2)/a_n, (z + 1/2)/a_n) clipped at 0");
  evaluate_report(r);
  return r;
}

VerificationReport check_bridge_sampler(const StepLaw& law, std::int64_t n, std::int64_t x, std::int64_t y,
                                        std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("check_bridge_sampler: samples must be >= 1");
  auto r = make_report("bridge_sampler", law, {{"n", n}, {"x", x}, {"y", y}, {"samples", samples}}, 1.0, 0.999);
  r.seed = seed;
  const auto table = bridge_table(law, x, y, n);
  std::vector<std::map<std::int64_t, double>> counts(static_cast<std::size_t>(n + 1));
  RandomState rng(seed);
  for (std::int64_t s = 0; s < samples; ++s) {
    const auto path = sample_bridge(table, rng);
    for (std::int64_t m = 1; m < n; ++m) counts[static_cast<std::size_t>(m)][path.positions[static_cast<std::size_t>(m)]] += 1.0;
  }
  const double total = static_cast<double>(samples);
  for (std::int64_t m = 1; m < n; ++m) {
    const auto exact = bridge_marginal_exact(table, m);
    const auto& observed = counts[static_cast<std::size_t>(m)];
    bool outside = false;
    for (const auto& [z, c] : observed)
      if (exact.at(z) <= 0.0) outside = true;
    // Adjacent cells are pooled until each expected count reaches 5.
    std::vector<std::pair<double, double>> bins;  // expected, observed
    double e_acc = 0.0, o_acc = 0.0;
    for (auto z = exact.lo(); z <= exact.hi(); ++z) {
      e_acc += total * exact.at(z);
      auto it = observed.find(z);
      o_acc += it == observed.end() ? 0.0 : it->second;
      if (e_acc >= 5.0) {
        bins.emplace_back(e_acc, o_acc);
        e_acc = o_acc = 0.0;
      }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
      if (bins.empty())
        bins.emplace_back(e_acc, o_acc);
      else {
        bins.back().first += e_acc;
        bins.back().second += o_acc;
      }
    }
    double stat = 0.0;
    for (const auto& [e, o] : bins) stat += (o - e) * (o - e) / e;
    const auto dof = static_cast<double>(bins.size()) - 1.0;
    double p = 1.0;
    if (outside)
      p = 0.0;
    else if (dof > 0.0)
      p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat));
    r.computed.push_back({n, "m=" + std::to_string(m), p, {{"m", m}, {"chi2", stat}, {"dof", dof}}});
  }
  r.notes.push_back("value is the chi-square p-value; pass requires p >= 0.001 at every m");
  evaluate_report(r);
  return r;
}

VerificationReport check_harmonicity(const StepLaw& law, std::int64_t x_max) {
  if (x_max < 0) throw ConfigError("check_harmonicity: x_max must be >= 0");
  auto r = make_report("harmonicity", law, {{"x_max", x_max}}, 0.0, kHarmonicityTolerance);
  const auto table = build_renewal_table(law, x_max + law.max_up(), 16);
  r.computed.push_back({x_max, "", table.harmonicity_defect(), nlohmann::json::object()});
  r.diagnostics["truncation_error"] = table.truncation_error;
  evaluate_report(r);
  return r;
}

VerificationReport check_duality(const StepLaw& law, std::int64_t n_max, std::int64_t x_max) {
  if (n_max < 0 || x_max < 0) throw ConfigError("check_duality: n_max and x_max must be >= 0");
  auto r = make_report("duality", law, {{"n_max", n_max}, {"x_max", x_max}}, 0.0, 1e-12);
  const auto rhs = ladder_renewal_mass(law, n_max, x_max);
  double worst = 0.0;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const auto row = killed_row(law, 0, n);
    for (std::int64_t x = 0; x <= x_max; ++x)
      worst = std::max(worst, std::abs(row.at(x) - rhs[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)]));
  }
  r.computed.push_back({n_max, "", worst, nlohmann::json::object()});
  evaluate_report(r);
  return r;
}

VerificationReport check_polymer_contacts(const StepLaw& law, std::int64_t N, std::int64_t a, double eps) {
  auto r = make_report("polymer_contacts", law, {{"N", N}, {"a", a}, {"eps", eps}}, 0.0, 1e-6);
  const auto p = make_polymer_params(law, N, a, eps);
  const auto table = polymer_table(law, p);
  const double exact = expected_contacts(table);
  const double fd = log_partition_derivative(law, p);
  r.computed.push_back({N, "", std::abs(fd - exact), {{"expected_contacts", exact}, {"finite_difference", fd}}});
  r.diagnostics = {{"window", p.window}, {"Z", table.Z}, {"window_doubling_change", window_doubling_change(law, p)}};
  evaluate_report(r);
  return r;
}

VerificationReport check_polymer_eps0(const StepLaw& law, std::int64_t N, std::int64_t a) {
  auto r = make_report("polymer_eps0", law, {{"N", N}, {"a", a}}, 0.0, 1e-12);
  const auto p = make_polymer_params(law, N, a, 0.0);
  const double Z = partition_function(law, p);
  const auto pmf = walk_pmf(law, N);
  double target = 0.0;
  for (std::int64_t z = 0; z <= a; ++z) target += pmf.at(z);
  r.computed.push_back({N, "", std::abs(Z - target), {{"Z", Z}, {"walk_mass_in_stripe", target}}});
  evaluate_report(r);
  return r;
}

}  // namespace rwlab
