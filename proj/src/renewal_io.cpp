#include "rwlab/renewal_io.hpp"

#include <fstream>
#include <sstream>

#include "rwlab/error.hpp"
#include "rwlab/schema.hpp"

namespace rwlab {

nlohmann::json law_to_json(const StepLaw& law) {
  nlohmann::json support = nlohmann::json::array();
  for (const auto& m : law.support()) support.push_back({m.offset, m.probability});
  return {{"name", law.name()}, {"support", support}};
}

StepLaw law_from_json(const nlohmann::json& j) {
  try {
    std::vector<StepMass> masses;
    for (const auto& entry : j.at("support")) masses.push_back({entry.at(0).get<std::int64_t>(), entry.at(1).get<double>()});
    return StepLaw(j.at("name").get<std::string>(), std::move(masses));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("law json: ") + e.what());
  }
}

nlohmann::json renewal_to_json(const RenewalTable& t) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "renewal_table"},
          {"law", law_to_json(t.law)},
          {"x_max", t.x_max},
          {"n_max", t.n_max},
          {"V", t.V},
          {"U", t.U},
          {"h_minus_pmf", t.h_minus_pmf},
          {"h_plus_pmf", t.h_plus_pmf},
          {"t_minus_tail", t.t_minus_tail},
          {"t_plus_tail", t.t_plus_tail},
          {"truncation_error", t.truncation_error}};
}

RenewalTable renewal_from_json(const nlohmann::json& j) {
  RenewalTable t{law_from_json(j.at("law")), 0, 0, {}, {}, {}, {}, {}, {}, 0.0};
  try {
    if (j.at("schema_version").get<std::string>() != kSchemaVersion)
      throw ConfigError("renewal json: unsupported schema version '" + j.at("schema_version").get<std::string>() + "'");
    t.x_max = j.at("x_max").get<std::int64_t>();
    t.n_max = j.at("n_max").get<std::int64_t>();
    t.V = j.at("V").get<std::vector<double>>();
    t.U = j.at("U").get<std::vector<double>>();
    t.h_minus_pmf = j.at("h_minus_pmf").get<std::vector<double>>();
    t.h_plus_pmf = j.at("h_plus_pmf").get<std::vector<double>>();
    t.t_minus_tail = j.at("t_minus_tail").get<std::vector<double>>();
    t.t_plus_tail = j.at("t_plus_tail").get<std::vector<double>>();
    t.truncation_error = j.at("truncation_error").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("renewal json: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(t.x_max + 1);
  if (t.x_max < 0 || t.V.size() != n || t.U.size() != n)
    throw ConfigError("renewal json: V/U length does not match x_max");
  if (const double defect = t.harmonicity_defect(); defect > kHarmonicityTolerance) {
    std::ostringstream msg;
    msg << "renewal json: loaded V violates harmonicity by " << defect;
    throw TableInconsistency(msg.str());
  }
  return t;
}

void save_renewal_table(const RenewalTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write renewal table to '" + path + "'");
  out << renewal_to_json(table).dump(1) << '\n';
}

RenewalTable load_renewal_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open renewal table '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("renewal table '" + path + "': " + e.what());
  }
  return renewal_from_json(j);
}

}  // namespace rwlab
