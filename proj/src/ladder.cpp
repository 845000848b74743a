#include "rwlab/ladder.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>

#include "rwlab/error.hpp"

namespace rwlab {

namespace {

void require_non_degenerate(const StepLaw& law, const char* op) {
  if (law.max_up() == 0 || law.max_down() == 0)
    throw DomainError(std::string(op) + ": law '" + law.name() + "' does not oscillate (needs jumps of both signs)");
}

void require_non_negative(std::int64_t v, const char* what, const char* op) {
  if (v < 0) throw DomainError(std::string(op) + ": " + what + " must be >= 0, got " + std::to_string(v));
}

LatticeRow restrict(const LatticeRow& row, const StateWindow& keep) {
  if (row.empty()) return {};
  const auto lo = keep.lo ? std::max(*keep.lo, row.lo()) : row.lo();
  const auto hi = keep.hi ? std::min(*keep.hi, row.hi()) : row.hi();
  if (hi < lo) return {};
  const auto m = row.masses();
  std::vector<double> out(m.begin() + (lo - row.lo()), m.begin() + (hi - row.lo() + 1));
  LatticeRow r(lo, std::move(out));
  r.trim();
  return r;
}

}  // namespace

KilledDistribution killed_pmf(const StepLaw& law, std::int64_t start, std::int64_t horizon) {
  require_non_negative(start, "start", "killed_pmf");
  require_non_negative(horizon, "horizon", "killed_pmf");
  KilledDistribution out{law, start, horizon, {}};
  out.rows.reserve(static_cast<std::size_t>(horizon + 1));
  out.rows.push_back(LatticeRow::point_mass(start));
  for (std::int64_t j = 0; j < horizon; ++j)
    out.rows.push_back(advance(out.rows.back(), law, StateWindow::non_negative()));
  return out;
}

LatticeRow killed_row(const StepLaw& law, std::int64_t start, std::int64_t n) {
  require_non_negative(start, "start", "killed_row");
  require_non_negative(n, "n", "killed_row");
  LatticeRow row = LatticeRow::point_mass(start);
  for (std::int64_t j = 0; j < n; ++j) row = advance(row, law, StateWindow::non_negative());
  return row;
}

double survival(const StepLaw& law, std::int64_t start, std::int64_t n) {
  require_non_negative(start, "start", "survival");
  return killed_row(law, start, n).total();
}

std::vector<double> survival_curve(const StepLaw& law, std::int64_t start, std::int64_t n_max) {
  require_non_negative(start, "start", "survival_curve");
  require_non_negative(n_max, "n_max", "survival_curve");
  std::vector<double> out{1.0};
  LatticeRow row = LatticeRow::point_mass(start);
  for (std::int64_t j = 1; j <= n_max; ++j) {
    row = advance(row, law, StateWindow::non_negative());
    out.push_back(row.total());
  }
  return out;
}

std::vector<double> weak_ascending_tail(const StepLaw& law, std::int64_t n_max) {
  require_non_negative(n_max, "n_max", "weak_ascending_tail");
  std::vector<double> out{1.0};
  LatticeRow row = LatticeRow::point_mass(0);
  for (std::int64_t j = 1; j <= n_max; ++j) {
    row = advance(row, law, StateWindow::at_most(-1));
    out.push_back(row.total());
  }
  return out;
}

double v_mass(const StepLaw& law, std::int64_t n, std::int64_t x) {
  if (n < 1 || x < 1) throw DomainError("v_mass: requires n >= 1 and x >= 1");
  LatticeRow row = LatticeRow::point_mass(0);
  for (std::int64_t j = 1; j < n; ++j) row = advance(row, law, StateWindow::at_least(-x + 1));
  return advance(row, law, StateWindow::between(-x, -x)).at(-x);
}

std::vector<std::vector<double>> v_mass_table(const StepLaw& law, std::int64_t n_max, std::int64_t x_max) {
  require_non_negative(n_max, "n_max", "v_mass_table");
  require_non_negative(x_max, "x_max", "v_mass_table");
  std::vector<std::vector<double>> v(static_cast<std::size_t>(n_max + 1),
                                     std::vector<double>(static_cast<std::size_t>(x_max + 1), 0.0));
  v[0][0] = 1.0;
  for (std::int64_t k = 1; k <= x_max; ++k) {
    LatticeRow row = LatticeRow::point_mass(0);
    for (std::int64_t j = 1; j <= n_max; ++j) {
      LatticeRow full = advance(row, law, StateWindow::at_least(-k));
      v[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = full.at(-k);
      row = restrict(full, StateWindow::at_least(-k + 1));
      if (row.empty()) break;
    }
  }
  return v;
}

double u_mass(const StepLaw& law, std::int64_t n, std::int64_t x) {
  require_non_negative(n, "n", "u_mass");
  require_non_negative(x, "x", "u_mass");
  return killed_row(law, 0, n).at(x);
}

double FirstLadderLaws::h_minus_mass(std::int64_t h) const {
  double s = 0.0;
  for (const auto& row : joint_minus)
    if (h >= 0 && h < static_cast<std::int64_t>(row.size())) s += row[static_cast<std::size_t>(h)];
  return s;
}

FirstLadderLaws first_ladder_laws(const StepLaw& law, std::int64_t n_max) {
  if (n_max < 1) throw DomainError("first_ladder_laws: n_max must be >= 1");
  const auto d = static_cast<std::size_t>(law.max_down());
  const auto u = static_cast<std::size_t>(law.max_up());
  const auto rows = static_cast<std::size_t>(n_max + 1);

  FirstLadderLaws out;
  out.n_max = n_max;
  out.joint_minus.assign(rows, std::vector<double>(d + 1, 0.0));
  out.joint_plus.assign(rows, std::vector<double>(u + 1, 0.0));
  out.t_minus.assign(rows, 0.0);
  out.t_plus.assign(rows, 0.0);

  // Descending: survive on [0, inf), read the mass that lands below 0.
  LatticeRow alive = LatticeRow::point_mass(0);
  for (std::int64_t n = 1; n <= n_max && !alive.empty(); ++n) {
    LatticeRow full = advance(alive, law);
    for (std::size_t h = 1; h <= d; ++h) {
      const double m = full.at(-static_cast<std::int64_t>(h));
      out.joint_minus[static_cast<std::size_t>(n)][h] = m;
      out.t_minus[static_cast<std::size_t>(n)] += m;
    }
    alive = restrict(full, StateWindow::non_negative());
  }
  out.tail_minus = alive.total();

  // Weak ascending: survive on (-inf, -1], read the mass that lands at >= 0.
  alive = LatticeRow::point_mass(0);
  for (std::int64_t n = 1; n <= n_max && !alive.empty(); ++n) {
    LatticeRow full = advance(alive, law);
    for (std::size_t h = 0; h <= u; ++h) {
      const double m = full.at(static_cast<std::int64_t>(h));
      out.joint_plus[static_cast<std::size_t>(n)][h] = m;
      out.t_plus[static_cast<std::size_t>(n)] += m;
    }
    alive = restrict(full, StateWindow::at_most(-1));
  }
  out.tail_plus = alive.total();
  out.truncation_error = out.tail_minus + out.tail_plus;
  return out;
}

namespace {

using cplx = std::complex<double>;

// Coefficients are stored lowest degree first.
std::vector<double> divide_by_z_minus_one(const std::vector<double>& a, double& remainder) {
  const std::size_t deg = a.size() - 1;
  std::vector<double> q(deg, 0.0);
  q[deg - 1] = a[deg];
  for (std::size_t i = deg - 1; i >= 1; --i) q[i - 1] = a[i] + q[i];
  remainder = a[0] + q[0];
  return q;
}

cplx horner(const std::vector<double>& a, cplx z) {
  cplx acc = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * z + a[i];
  return acc;
}

cplx horner_derivative(const std::vector<double>& a, cplx z) {
  cplx acc = 0.0;
  for (std::size_t i = a.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * a[i];
  return acc;
}

std::vector<cplx> polynomial_roots(const std::vector<double>& a) {
  const std::size_t deg = a.size() - 1;
  if (deg == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 0; i < deg; ++i) {
    companion(0, static_cast<Eigen::Index>(i)) = -a[deg - 1 - i] / a[deg];
    if (i + 1 < deg) companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericError("ladder_height_laws: companion eigenvalue solver failed");
  std::vector<cplx> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    cplx z = solver.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const cplx df = horner_derivative(a, z);
      if (std::abs(df) == 0.0) break;
      const cplx step = horner(a, z) / df;
      z -= step;
      if (std::abs(step) < 1e-17 * std::max(1.0, std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

std::vector<double> real_product(double lead, const std::vector<cplx>& roots) {
  std::vector<cplx> p{lead};
  for (const auto& r : roots) {
    std::vector<cplx> next(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i];
      next[i] -= r * p[i];
    }
    p = std::move(next);
  }
  std::vector<double> out;
  for (const auto& c : p) out.push_back(c.real());
  return out;
}

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

LadderHeightLaws ladder_height_laws(const StepLaw& law) {
  require_non_degenerate(law, "ladder_height_laws");
  const auto d = static_cast<std::size_t>(law.max_down());
  const auto u = static_cast<std::size_t>(law.max_up());

  // z^d (1 - f(z))
  std::vector<double> poly(d + u + 1, 0.0);
  poly[d] += 1.0;
  for (const auto& m : law.support()) poly[static_cast<std::size_t>(m.offset + law.max_down())] -= m.probability;

  double rem1 = 0.0, rem2 = 0.0;
  auto once = divide_by_z_minus_one(poly, rem1);
  auto quotient = divide_by_z_minus_one(once, rem2);
  if (std::abs(rem1) > 1e-12 || std::abs(rem2) > 1e-12)
    throw NumericError("ladder_height_laws: z = 1 is not a double root (law not centred?)");

  std::vector<cplx> inside{1.0}, outside{1.0};
  for (const auto& r : polynomial_roots(quotient)) {
    const double modulus = std::abs(r);
    if (std::abs(modulus - 1.0) < 1e-10)
      throw NumericError("ladder_height_laws: characteristic root on the unit circle (periodic law?)");
    (modulus < 1.0 ? inside : outside).push_back(r);
  }
  if (inside.size() != d || outside.size() != u)
    throw NumericError("ladder_height_laws: root split " + std::to_string(inside.size()) + "/" +
                       std::to_string(outside.size()) + " does not match jump range " + std::to_string(d) + "/" +
                       std::to_string(u));

  const auto descending = real_product(1.0, inside);                 // z^d - sum h_j z^{d-j}
  const auto ascending = real_product(-law.probability(law.max_up()), outside);  // 1 - sum g_k z^k

  LadderHeightLaws out;
  out.h_minus.assign(d + 1, 0.0);
  for (std::size_t j = 1; j <= d; ++j) out.h_minus[j] = -descending[d - j];
  out.h_plus.assign(u + 1, 0.0);
  out.h_plus[0] = 1.0 - ascending[0];
  for (std::size_t k = 1; k <= u; ++k) out.h_plus[k] = -ascending[k];

  for (auto* v : {&out.h_minus, &out.h_plus}) {
    for (auto& m : *v) {
      if (m < -1e-12) throw NumericError("ladder_height_laws: negative ladder-height mass " + std::to_string(m));
      m = std::max(m, 0.0);
    }
  }
  const auto product = multiply(ascending, descending);
  double residual = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) residual = std::max(residual, std::abs(product[i] - poly[i]));
  out.factorization_residual = residual;
  return out;
}

std::vector<double> renewal_V(const StepLaw& law, std::int64_t x_max) {
  require_non_negative(x_max, "x_max", "renewal_V");
  const auto h = ladder_height_laws(law).h_minus;
  std::vector<double> V(static_cast<std::size_t>(x_max + 1), 0.0);
  for (std::size_t x = 0; x < V.size(); ++x) {
    double acc = 1.0;
    for (std::size_t j = 1; j < h.size() && j <= x; ++j) acc += h[j] * V[x - j];
    V[x] = acc;
  }
  return V;
}

std::vector<double> renewal_U(const StepLaw& law, std::int64_t x_max) {
  require_non_negative(x_max, "x_max", "renewal_U");
  const auto g = ladder_height_laws(law).h_plus;
  std::vector<double> U(static_cast<std::size_t>(x_max + 1), 0.0);
  const double stay = 1.0 - g[0];
  for (std::size_t x = 0; x < U.size(); ++x) {
    double acc = 1.0;
    for (std::size_t j = 1; j < g.size() && j <= x; ++j) acc += g[j] * U[x - j];
    U[x] = acc / stay;
  }
  return U;
}

TruncatedRenewal renewal_V_truncated(const StepLaw& law, std::int64_t x_max, std::int64_t n_max) {
  require_non_negative(x_max, "x_max", "renewal_V_truncated");
  const auto ladder = first_ladder_laws(law, n_max);
  std::vector<double> h(static_cast<std::size_t>(law.max_down() + 1), 0.0);
  for (std::size_t j = 1; j < h.size(); ++j) h[j] = ladder.h_minus_mass(static_cast<std::int64_t>(j));
  TruncatedRenewal out;
  out.values.assign(static_cast<std::size_t>(x_max + 1), 0.0);
  for (std::size_t x = 0; x < out.values.size(); ++x) {
    double acc = 1.0;
    for (std::size_t j = 1; j < h.size() && j <= x; ++j) acc += h[j] * out.values[x - j];
    out.values[x] = acc;
  }
  out.missing_mass = ladder.tail_minus;
  return out;
}

std::vector<double> renewal_U_partial(const StepLaw& law, std::int64_t x_max, std::int64_t n_max) {
  require_non_negative(x_max, "x_max", "renewal_U_partial");
  require_non_negative(n_max, "n_max", "renewal_U_partial");
  std::vector<double> out(static_cast<std::size_t>(x_max + 1), 0.0);
  LatticeRow row = LatticeRow::point_mass(0);
  for (std::int64_t n = 0; n <= n_max; ++n) {
    if (n > 0) row = advance(row, law, StateWindow::non_negative());
    double cum = 0.0;
    for (std::int64_t x = 0; x <= x_max; ++x) {
      cum += row.at(x);
      out[static_cast<std::size_t>(x)] += cum;
    }
  }
  return out;
}

double RenewalTable::harmonicity_defect() const {
  double worst = 0.0;
  const std::int64_t last = x_max - law.max_up();
  for (std::int64_t x = 0; x <= last; ++x) {
    double acc = 0.0;
    for (const auto& m : law.support()) {
      const auto y = x + m.offset;
      if (y >= 0) acc += m.probability * V[static_cast<std::size_t>(y)];
    }
    worst = std::max(worst, std::abs(acc - V[static_cast<std::size_t>(x)]));
  }
  return worst;
}

RenewalTable build_renewal_table(const StepLaw& law, std::int64_t x_max, std::int64_t n_max) {
  require_non_negative(x_max, "x_max", "build_renewal_table");
  require_non_negative(n_max, "n_max", "build_renewal_table");
  const auto heights = ladder_height_laws(law);
  RenewalTable t{law, x_max, n_max, renewal_V(law, x_max), renewal_U(law, x_max), heights.h_minus, heights.h_plus,
                 survival_curve(law, 0, n_max), weak_ascending_tail(law, n_max), 0.0};
  double sum_minus = 0.0, sum_plus = 0.0;
  for (double m : t.h_minus_pmf) sum_minus += m;
  for (double m : t.h_plus_pmf) sum_plus += m;
  t.truncation_error = std::abs(1.0 - sum_minus) + std::abs(1.0 - sum_plus) + heights.factorization_residual;
  if (t.truncation_error > kRenewalTruncationBudget) {
    std::ostringstream msg;
    msg << "build_renewal_table: truncation bound " << t.truncation_error << " exceeds budget "
        << kRenewalTruncationBudget;
    throw BudgetError(msg.str());
  }
  if (const double defect = t.harmonicity_defect(); defect > kHarmonicityTolerance) {
    std::ostringstream msg;
    msg << "build_renewal_table: V violates harmonicity by " << defect;
    throw TableInconsistency(msg.str());
  }
  return t;
}

std::shared_ptr<const RenewalTable> cached_renewal_table(const StepLaw& law, std::int64_t x_max, std::int64_t n_max) {
  static std::mutex guard;
  static std::map<std::string, std::shared_ptr<const RenewalTable>> cache;
  std::ostringstream key;
  key.precision(17);
  for (const auto& m : law.support()) key << m.offset << ':' << m.probability << ';';
  key << '|' << x_max << '|' << n_max;
  {
    std::lock_guard lock(guard);
    if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const RenewalTable>(build_renewal_table(law, x_max, n_max));
  std::lock_guard lock(guard);
  return cache.emplace(key.str(), std::move(table)).first->second;
}

std::vector<std::vector<double>> ladder_renewal_mass(const StepLaw& law, std::int64_t n_max, std::int64_t x_max) {
  require_non_negative(n_max, "n_max", "ladder_renewal_mass");
  require_non_negative(x_max, "x_max", "ladder_renewal_mass");
  const auto rows = static_cast<std::size_t>(n_max + 1);
  const auto cols = static_cast<std::size_t>(x_max + 1);
  std::vector<std::vector<double>> u(rows, std::vector<double>(cols, 0.0));
  u[0][0] = 1.0;
  if (n_max == 0) return u;
  const auto first = first_ladder_laws(law, n_max).joint_plus;
  for (std::size_t n = 1; n < rows; ++n) {
    for (std::size_t x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (std::size_t m = 1; m <= n; ++m)
        for (std::size_t h = 0; h < first[m].size() && h <= x; ++h) acc += first[m][h] * u[n - m][x - h];
      u[n][x] = acc;
    }
  }
  return u;
}

std::pair<double, double> duality_check(const StepLaw& law, std::int64_t n, std::int64_t x) {
  require_non_negative(n, "n", "duality_check");
  require_non_negative(x, "x", "duality_check");
  const double lhs = u_mass(law, n, x);
  const double rhs = ladder_renewal_mass(law, n, x)[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)];
  return {lhs, rhs};
}

}  // namespace rwlab
