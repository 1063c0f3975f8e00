#pragma once

// Versioned JSON report schema shared by the CLI, the results cache and the
// tests, plus a flat text rendering with the same content.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "crystalk/lattice.hpp"
#include "crystalk/oracle.hpp"
#include "crystalk/repring.hpp"
#include "crystalk/toruskt.hpp"
#include "json.hpp"

namespace crystalk {

inline constexpr const char* kSchemaVersion = "1.0";

struct RankPair {
  std::uint64_t k0 = 0, k1 = 0;
  friend bool operator==(const RankPair&, const RankPair&) = default;
};

struct RouteComparison {
  RankPair delocalized;
  RankPair assembly;
  std::string assembly_method;  // kunneth | module_structure | rational
  bool agree = false;
  friend bool operator==(const RouteComparison&, const RouteComparison&) = default;
};

struct CStarSection {
  std::uint64_t K0 = 0, K1 = 0;
  bool integral = false;
  friend bool operator==(const CStarSection&, const CStarSection&) = default;
};

struct Report {
  std::string spec_version = kSchemaVersion;
  std::string command;
  IntMatrix matrix;
  StructureInvariants invariants;
  ActionClass action_class = ActionClass::Trivial;
  FixedSetDescription fixed_set;
  std::optional<RankPair> ranks;
  std::optional<ScopeFlag> scope;
  std::optional<ModuleStructure> module_structure;
  std::optional<CertificateTrace> certificate;
  std::optional<std::string> caveat;
  std::optional<RouteComparison> routes;
  std::optional<CStarSection> cstar;
  friend bool operator==(const Report&, const Report&) = default;
};

/// classify: invariants, class and fixed set only.
inline Report make_base_report(std::string command, const InvolutiveLattice& L) {
  Report r;
  r.command = std::move(command);
  r.matrix = L.matrix();
  r.invariants = invariants(L);
  r.action_class = classify(L);
  r.fixed_set = fixed_set(L);
  return r;
}

inline void attach(Report& r, const KRankReport& k) {
  r.ranks = RankPair{k.k0, k.k1};
  r.scope = k.scope;
  r.module_structure = k.module_structure;
  r.certificate = k.certificate;
  r.caveat = k.caveat;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["spec_version"] = r.spec_version;
  j["command"] = r.command;
  j["input"] = {{"n", r.matrix.rows()}, {"matrix", oracle::matrix_to_json(r.matrix)}};
  j["invariants"] = to_json(r.invariants);
  j["class"] = std::string(to_string(r.action_class));
  j["fixed_set"] = {{"dim", r.fixed_set.dim}, {"components", r.fixed_set.components}};
  if (r.ranks) j["ranks"] = {{"k0", r.ranks->k0}, {"k1", r.ranks->k1}};
  if (r.scope) j["scope_flag"] = std::string(to_string(*r.scope));
  if (r.module_structure)
    j["module_structure"] = {{"k0", to_json(r.module_structure->k0)}, {"k1", to_json(r.module_structure->k1)}};
  if (r.certificate) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : *r.certificate)
      steps.push_back({{"step", s.step}, {"input", s.input}, {"output", s.output}, {"anchor", s.anchor}});
    j["certificate"] = steps;
  }
  if (r.caveat) j["caveat"] = *r.caveat;
  if (r.routes)
    j["routes"] = {{"delocalized", {{"k0", r.routes->delocalized.k0}, {"k1", r.routes->delocalized.k1}}},
                   {"assembly",
                    {{"k0", r.routes->assembly.k0},
                     {"k1", r.routes->assembly.k1},
                     {"method", r.routes->assembly_method}}},
                   {"agree", r.routes->agree}};
  if (r.cstar) j["cstar"] = {{"K0", r.cstar->K0}, {"K1", r.cstar->K1}, {"integral", r.cstar->integral}};
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.spec_version = j.at("spec_version").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.matrix = oracle::matrix_from_json(j.at("input").at("matrix"));
  const auto& inv = j.at("invariants");
  r.invariants = {inv.at("a").get<std::size_t>(), inv.at("b").get<std::size_t>(), inv.at("c").get<std::size_t>()};
  r.action_class = action_class_from_string(j.at("class").get<std::string>());
  r.fixed_set = {j.at("fixed_set").at("dim").get<std::size_t>(),
                 j.at("fixed_set").at("components").get<std::uint64_t>()};
  if (j.contains("ranks")) r.ranks = RankPair{j["ranks"].at("k0").get<std::uint64_t>(), j["ranks"].at("k1").get<std::uint64_t>()};
  if (j.contains("scope_flag")) r.scope = scope_flag_from_string(j["scope_flag"].get<std::string>());
  if (j.contains("module_structure"))
    r.module_structure = ModuleStructure{module_sum_from_json(j["module_structure"].at("k0")),
                                         module_sum_from_json(j["module_structure"].at("k1"))};
  if (j.contains("certificate")) {
    CertificateTrace steps;
    for (const auto& s : j["certificate"])
      steps.push_back({s.at("step").get<std::string>(), s.at("input"), s.at("output"), s.at("anchor").get<std::string>()});
    r.certificate = std::move(steps);
  }
  if (j.contains("caveat")) r.caveat = j["caveat"].get<std::string>();
  if (j.contains("routes")) {
    const auto& rt = j["routes"];
    r.routes = RouteComparison{{rt.at("delocalized").at("k0").get<std::uint64_t>(), rt.at("delocalized").at("k1").get<std::uint64_t>()},
                               {rt.at("assembly").at("k0").get<std::uint64_t>(), rt.at("assembly").at("k1").get<std::uint64_t>()},
                               rt.at("assembly").at("method").get<std::string>(),
                               rt.at("agree").get<bool>()};
  }
  if (j.contains("cstar"))
    r.cstar = CStarSection{j["cstar"].at("K0").get<std::uint64_t>(), j["cstar"].at("K1").get<std::uint64_t>(),
                           j["cstar"].at("integral").get<bool>()};
  return r;
}

namespace detail {

inline void flatten(const nlohmann::json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const auto& e) { return e.is_object(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace detail

/// One "path: value" line per leaf of the JSON form.
inline std::string render_text(const Report& r) {
  std::ostringstream os;
  detail::flatten(to_json(r), "", os);
  return os.str();
}

}  // namespace crystalk
