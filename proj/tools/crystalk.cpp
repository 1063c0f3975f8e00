// crystalk: command-line front end.
//
//   crystalk classify [FILE]            invariants, class, fixed set
//   crystalk ranks    [FILE] --route R  delocalized | kunneth | both
//   crystalk cstar    [FILE]            K_*(C*_r(Z^n x| Z/2))
//   crystalk verify   --n N --seed S --count C
//   crystalk catalog
//
// FILE is a JSON object {"n": int, "matrix": [[int]]}; "-" or no FILE reads
// stdin. --entry NAME takes the matrix from the catalog instead.
//
// Exit codes: 0 ok, 2 input error, 3 not an involution, 4 invariant
// violation or oracle mismatch, 5 out of scope.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "crystalk/crystalk.hpp"
#include "json.hpp"

#ifndef CRYSTALK_DEFAULT_TABLE_PATH
#define CRYSTALK_DEFAULT_TABLE_PATH ""
#endif

namespace {

using nlohmann::json;
namespace ck = crystalk;

enum Exit { kOk = 0, kInput = 2, kNotInvolution = 3, kViolation = 4, kScope = 5 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "text";
  std::string input = "-";
  std::string entry;
  std::string route = "delocalized";
  std::string cache;
  std::size_t n = 3;
  std::uint64_t seed = 0;
  std::size_t count = 3;
};

ck::ModuleTables load_module_tables() {
  if (const char* env = std::getenv("CRYSTALK_TABLE_PATH"); env && *env) {
    try {
      return ck::load_tables(env);
    } catch (const std::exception& e) {
      throw InputError(std::string("CRYSTALK_TABLE_PATH: ") + e.what());
    }
  }
  const std::string def = CRYSTALK_DEFAULT_TABLE_PATH;
  if (!def.empty() && std::filesystem::exists(def)) return ck::load_tables(def);
  return ck::builtin_tables();
}

ck::IntMatrix read_matrix(const Options& o) {
  if (!o.entry.empty()) {
    const auto* e = ck::find_catalog_entry(o.entry);
    if (!e) throw InputError("unknown catalog entry: " + o.entry);
    return e->matrix;
  }
  std::string text;
  if (o.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream f(o.input);
    if (!f) throw InputError("cannot open " + o.input);
    text.assign(std::istreambuf_iterator<char>(f), {});
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("matrix")) throw InputError("input must be an object with \"n\" and \"matrix\"");
  ck::IntMatrix A;
  try {
    A = ck::oracle::matrix_from_json(j["matrix"]);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long long>() != static_cast<long long>(A.rows()))
      throw InputError("\"n\" does not match the number of matrix rows");
  }
  return A;
}

// ---------------------------------------------------------------------------
// results cache: one JSON object per line, {"key": ..., "report": ...}

std::string cache_key(const std::string& command, const std::string& route, const ck::IntMatrix& A,
                      const ck::StructureInvariants& inv) {
  return std::to_string(A.rows()) + "|" + std::to_string(inv.a) + "," + std::to_string(inv.b) + "," +
         std::to_string(inv.c) + "|" + ck::sha256_hex(ck::oracle::matrix_to_json(A).dump()) + "|" + command +
         (route.empty() ? "" : ":" + route);
}

std::optional<json> cache_lookup(const std::string& path, const std::string& key) {
  std::ifstream f(path);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      if (j.at("key") == key) return j.at("report");
    } catch (const json::exception&) {
    }
  }
  return std::nullopt;
}

void cache_append(const std::string& path, const std::string& key, const json& report) {
  std::ofstream f(path, std::ios::app);
  f << json{{"key", key}, {"report", report}}.dump() << "\n";
}

void emit(const ck::Report& r, const Options& o) {
  if (o.format == "json")
    std::cout << ck::to_json(r).dump(2) << "\n";
  else
    std::cout << ck::render_text(r);
}

// ---------------------------------------------------------------------------
// subcommands

struct Outcome {
  ck::Report report;
  int code = kOk;
};

ck::RankPair oracle_rational_ranks(const ck::InvolutiveLattice& L) {
  if (L.n() <= ck::oracle::kMaxGridDim) {
    const auto p = ck::oracle::rational_ranks_by_oracles(L.matrix());
    return {p.k0, p.k1};
  }
  if (L.n() > ck::oracle::kMaxExteriorDim)
    throw ck::ScopeError("no independent rational route for n > " + std::to_string(ck::oracle::kMaxExteriorDim));
  const auto coh = ck::oracle::exterior_action_invariants(L.matrix());
  const auto fix = ck::fixed_set(L);
  return {coh.even_inv + fix.k_even(), coh.odd_inv + fix.k_odd()};
}

Outcome run_lattice_command(const std::string& command, const ck::InvolutiveLattice& L, const Options& o,
                            const ck::ModuleTables& tables) {
  Outcome out{ck::make_base_report(command, L)};
  auto& r = out.report;
  if (command == "ranks") {
    if (o.route == "delocalized") {
      auto k = ck::k_ranks_delocalized(L);
      if (r.invariants.c > 0) k.caveat = ck::regular_summand_caveat(r.invariants);
      ck::attach(r, k);
    } else if (o.route == "kunneth") {
      ck::attach(r, ck::kunneth_assembly(L, tables));
    } else {
      const auto deloc = ck::k_ranks_delocalized(L);
      ck::RouteComparison cmp;
      cmp.delocalized = {deloc.k0, deloc.k1};
      if (r.action_class == ck::ActionClass::MixedNonSplit) {
        cmp.assembly = oracle_rational_ranks(L);
        cmp.assembly_method = "rational";
        auto k = deloc;
        k.caveat = ck::regular_summand_caveat(r.invariants);
        ck::attach(r, k);
      } else {
        const auto full = r.action_class == ck::ActionClass::MixedSplit ? ck::kunneth_assembly(L, tables)
                                                                          : ck::integral_k_theory(L, tables);
        cmp.assembly = {full.k0, full.k1};
        cmp.assembly_method = r.action_class == ck::ActionClass::MixedSplit ? "kunneth" : "module_structure";
        ck::attach(r, full);
      }
      cmp.agree = cmp.assembly == cmp.delocalized;
      r.routes = cmp;
      if (!cmp.agree) out.code = kViolation;
    }
  } else if (command == "cstar") {
    const auto cs = ck::group_cstar_k(L, tables);
    ck::attach(r, cs.cohomology);
    r.scope = cs.scope;
    r.caveat = cs.caveat;
    r.cstar = ck::CStarSection{cs.k_homology0, cs.k_homology1, cs.integral};
  }
  return out;
}

int cmd_lattice(const std::string& command, const Options& o) {
  const auto tables = load_module_tables();
  const auto L = ck::validate_involution(read_matrix(o));
  const std::string route = command == "ranks" ? o.route : "";
  std::string key;
  if (!o.cache.empty()) {
    key = cache_key(command, route, L.matrix(), ck::invariants(L));
    if (auto hit = cache_lookup(o.cache, key)) {
      const auto r = ck::report_from_json(*hit);
      emit(r, o);
      return r.routes && !r.routes->agree ? kViolation : kOk;
    }
  }
  const auto out = run_lattice_command(command, L, o, tables);
  if (!o.cache.empty() && out.code == kOk) cache_append(o.cache, key, ck::to_json(out.report));
  emit(out.report, o);
  if (out.code == kViolation) std::cerr << "error: routes disagree\n";
  return out.code;
}

int cmd_verify(const Options& o) {
  if (o.n == 0) throw InputError("--n must be >= 1");
  const auto tables = load_module_tables();
  const auto corpus = ck::oracle::involution_corpus(o.n, o.seed, o.count);
  const auto s = ck::oracle::sweep(corpus, tables);

  if (o.format == "json") {
    json checks = json::array();
    for (const auto& c : s.checks) {
      json cj{{"check", c.name}, {"passed", c.passed}, {"failed", c.failed}, {"skipped", c.skipped}};
      if (!c.skip_reason.empty()) cj["skip_reason"] = c.skip_reason;
      if (!c.failures.empty()) cj["failures"] = c.failures;
      checks.push_back(cj);
    }
    std::cout << json{{"spec_version", ck::kSchemaVersion},
                      {"command", "verify"},
                      {"n", o.n},
                      {"seed", o.seed},
                      {"count", o.count},
                      {"members", s.members},
                      {"rational_only", s.rational_only},
                      {"grid_bound_error", s.grid_bound_error},
                      {"checks", checks},
                      {"ok", s.all_passed() && !s.grid_bound_error}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "verify n=" << o.n << " seed=" << o.seed << " count=" << o.count << " members=" << s.members
              << "\n";
    std::cout << std::left << std::setw(24) << "check" << std::right << std::setw(8) << "passed" << std::setw(8)
              << "failed" << std::setw(9) << "skipped"
              << "\n";
    for (const auto& c : s.checks) {
      std::cout << std::left << std::setw(24) << c.name << std::right << std::setw(8) << c.passed << std::setw(8)
                << c.failed << std::setw(9) << c.skipped;
      if (!c.skip_reason.empty()) std::cout << "  (" << c.skip_reason << ")";
      std::cout << "\n";
      for (const auto& f : c.failures) std::cout << "    FAIL " << f << "\n";
    }
    std::cout << "rational_only: " << s.rational_only << " member(s) flagged RationalOnly\n";
  }
  if (!s.all_passed()) return kViolation;
  if (s.grid_bound_error) {
    std::cerr << "error: grid oracle bound exceeded (n > " << ck::oracle::kMaxGridDim << ")\n";
    return kInput;
  }
  return kOk;
}

int cmd_catalog(const Options& o) {
  const auto tables = load_module_tables();
  json entries = json::array();
  bool ok = true;
  for (const auto& e : ck::catalog()) {
    const auto L = ck::validate_involution(e.matrix);
    const auto cs = ck::group_cstar_k(L, tables);
    const bool match = cs.k_homology0 == e.expected_k0 && cs.k_homology1 == e.expected_k1 && cs.scope == e.expected_scope;
    ok = ok && match;
    entries.push_back({{"name", e.name},
                       {"n", e.n},
                       {"matrix", ck::oracle::matrix_to_json(e.matrix)},
                       {"class", std::string(ck::to_string(ck::classify(L)))},
                       {"expected", {{"K0", e.expected_k0}, {"K1", e.expected_k1}}},
                       {"computed", {{"K0", cs.k_homology0}, {"K1", cs.k_homology1}}},
                       {"scope_flag", std::string(ck::to_string(cs.scope))},
                       {"provenance", e.provenance},
                       {"match", match}});
  }
  if (o.format == "json") {
    std::cout << json{{"spec_version", ck::kSchemaVersion}, {"command", "catalog"}, {"entries", entries}}.dump(2)
              << "\n";
  } else {
    for (const auto& e : entries)
      std::cout << std::left << std::setw(20) << e["name"].get<std::string>() << " n=" << e["n"].get<int>()
                << " K0=" << e["computed"]["K0"].get<std::uint64_t>() << " K1=" << e["computed"]["K1"].get<std::uint64_t>()
                << " " << e["scope_flag"].get<std::string>() << " (" << e["provenance"].get<std::string>() << ")"
                << (e["match"].get<bool>() ? "" : "  MISMATCH") << "\n";
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Z/2-equivariant K-theory of T^n and K_*(C*_r(Z^n x| Z/2))"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "JSON input file, - for stdin");
    sub->add_option("--entry", o.entry, "use a catalog entry as input");
    sub->add_option("--cache", o.cache, "append-only JSON-lines results cache");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto* classify = app.add_subcommand("classify", "invariants, action class and fixed set");
  add_input(classify);
  auto* ranks = app.add_subcommand("ranks", "ranks of K^*_{Z/2}(T^n)");
  add_input(ranks);
  ranks->add_option("--route", o.route, "delocalized | kunneth | both")
      ->check(CLI::IsMember({"delocalized", "kunneth", "both"}));
  auto* cstar = app.add_subcommand("cstar", "K_*(C*_r(Z^n x| Z/2))");
  add_input(cstar);
  auto* verify = app.add_subcommand("verify", "run the oracle suite on a generated corpus");
  verify->add_option("--n", o.n, "dimension");
  verify->add_option("--seed", o.seed, "corpus seed");
  verify->add_option("--count", o.count, "conjugates per class");
  verify->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  auto* catalog = app.add_subcommand("catalog", "named examples, recomputed");
  catalog->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*catalog) return cmd_catalog(o);
    const std::string command = *classify ? "classify" : *ranks ? "ranks" : "cstar";
    return cmd_lattice(command, o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ck::InvolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ck::InvolutionErrorKind::NotSquare ? kInput : kNotInvolution;
  } catch (const ck::ScopeError& e) {
    std::cerr << "error: out of scope: " << e.what() << "\n";
    return kScope;
  } catch (const ck::InvariantViolation& e) {
    std::cerr << "error: invariant violation: " << e.what() << "\n";
    return kViolation;
  } catch (const ck::oracle::GridTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ck::oracle::DimensionTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
}
