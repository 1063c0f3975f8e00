// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "crystalk/crystalk.hpp"

namespace {

namespace ck = crystalk;
namespace oc = crystalk::oracle;
using ck::IntMatrix;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

IntMatrix split(std::size_t r, std::size_t n) {
  IntMatrix A = IntMatrix::identity(n);
  for (std::size_t i = r; i < n; ++i) A(i, i) = -1;
  return A;
}

// Every "torsion_flag" in a certificate; returns the number seen and whether any is true.
void scan_torsion_flags(const nlohmann::json& j, std::size_t& seen, bool& any_true) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "torsion_flag") {
        ++seen;
        any_true = any_true || v.get<bool>();
      } else {
        scan_torsion_flags(v, seen, any_true);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) scan_torsion_flags(v, seen, any_true);
  }
}

bool certificate_torsion_free(const ck::CertificateTrace& cert, std::size_t& flags) {
  std::size_t seen = 0;
  bool any_true = false;
  for (const auto& s : cert) {
    scan_torsion_flags(s.input, seen, any_true);
    scan_torsion_flags(s.output, seen, any_true);
  }
  flags += seen;
  return seen > 0 && !any_true;
}

Outcome criterion1() {
  Outcome o;
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto cs = ck::group_cstar_k(ck::validate_involution(split(0, n)));
    o.require(cs.k_homology0 == 3 * ck::pow2(n - 1) && cs.k_homology1 == 0 && cs.integral,
              "n=" + std::to_string(n) + ": got (" + std::to_string(cs.k_homology0) + "," +
                  std::to_string(cs.k_homology1) + ")");
  }
  if (o.ok) o.detail = "-I_n, n=1..10: K0 = 3*2^(n-1), K1 = 0";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t certs = 0;
  for (std::size_t n = 2; n <= 10; ++n)
    for (std::size_t r = 1; r < n; ++r) {
      const auto L = ck::validate_involution(split(r, n));
      const auto d = ck::k_ranks_delocalized(L);
      const auto k = ck::kunneth_assembly(L);
      const auto want = 3 * ck::pow2(n - 2);
      const std::string tag = "n=" + std::to_string(n) + " r=" + std::to_string(r);
      o.require(d.k0 == want && d.k1 == want, tag + ": delocalized (" + std::to_string(d.k0) + "," +
                                                  std::to_string(d.k1) + ")");
      o.require(k.k0 == want && k.k1 == want, tag + ": kunneth (" + std::to_string(k.k0) + "," +
                                                  std::to_string(k.k1) + ")");
      o.require(k.certificate && k.certificate->size() == 5, tag + ": certificate missing");
      ++certs;
    }
  if (o.ok) o.detail = std::to_string(certs) + " split cases, both routes 3*2^(n-2) per degree";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto L = ck::validate_involution(IntMatrix{{-1}});
  const auto cs = ck::group_cstar_k(L);
  o.require(cs.k_homology0 == 3 && cs.k_homology1 == 0, "ranks differ");
  o.require(cs.integral, "not integral");
  const auto& ms = cs.cohomology.module_structure;
  o.require(ms && ms->k0.rank() == 3 && ms->k0.is_torsion_free() && ms->k1.is_zero(), "module structure");
  if (o.ok) o.detail = "A=(-1): K0 = Z^3 (" + ck::to_string(ms->k0) + "), K1 = 0";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t members = 0, split_members = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto corpus = oc::involution_corpus(n, 4000 + n, 25);
    for (const auto& m : corpus.members) {
      const auto L = ck::validate_involution(m.matrix);
      const auto d = ck::k_ranks_delocalized(L);
      const auto ref = ck::k_ranks_delocalized(ck::validate_involution(ck::canonical_matrix(m.canonical)));
      o.require(d.k0 == ref.k0 && d.k1 == ref.k1, "not conjugation invariant: " + ck::to_string(m.matrix));
      if (ck::classify(L) == ck::ActionClass::MixedSplit) {
        const auto k = ck::kunneth_assembly(L);
        o.require(k.k0 == d.k0 && k.k1 == d.k1, "routes disagree: " + ck::to_string(m.matrix));
        ++split_members;
      }
      ++members;
    }
  }
  if (o.ok)
    o.detail = std::to_string(members) + " members (25 per class, n<=6), " + std::to_string(split_members) +
               " split members agree";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t ext = 0, grid = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto corpus = oc::involution_corpus(n, 5000 + n, 25);
    for (const auto& m : corpus.members) {
      const auto L = ck::validate_involution(m.matrix);
      o.require(oc::exterior_action_invariants(m.matrix) == ck::cohomology_invariants(L),
                "exterior vs trace: " + ck::to_string(m.matrix));
      ++ext;
      if (n <= 6) {
        const auto g = oc::fixed_grid_components(m.matrix, 4);
        const auto f = ck::fixed_set(L);
        o.require(g.components == f.components && g.dim == f.dim, "grid vs SNF: " + ck::to_string(m.matrix));
        ++grid;
      }
    }
  }
  if (o.ok)
    o.detail = std::to_string(ext) + " exterior checks (n<=8), " + std::to_string(grid) + " grid checks (n<=6, d=4)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::ifstream f(CRYSTALK_TABLE_FILE, std::ios::binary);
  const std::string frozen{std::istreambuf_iterator<char>(f), {}};
  o.require(!frozen.empty(), "frozen table file missing");
  o.require(ck::render_tables(oc::generate_tables()) == frozen, "regenerated tables differ from the frozen file");
  const auto ii = oc::resolution_tor(ck::ModuleClass::TrivZ, ck::ModuleClass::TrivZ, 1);
  o.require(ii.abelian.free_rank == 0 && ii.abelian.torsion == std::vector<ck::Integer>{2}, "Tor1(R/I,R/I) != Z/2");
  const auto ij = oc::resolution_tor(ck::ModuleClass::TrivZ, ck::ModuleClass::SignZ, 1);
  o.require(ij.abelian.free_rank == 0 && ij.abelian.torsion.empty(), "Tor1(R/I,R/J) != 0");
  if (o.ok) o.detail = "tables byte-identical; Tor1(R/I,R/I) = Z/2, Tor1(R/I,R/J) = 0";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::size_t runs = 0, flags = 0;
  auto check = [&](const IntMatrix& A) {
    const auto k = ck::kunneth_assembly(ck::validate_involution(A));
    o.require(k.certificate && certificate_torsion_free(*k.certificate, flags),
              "certificate has torsion: " + ck::to_string(A));
    ++runs;
  };
  for (std::size_t n = 2; n <= 10; ++n)
    for (std::size_t r = 1; r < n; ++r) check(split(r, n));
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& m : oc::involution_corpus(n, 7000 + n, 5).members)
      if (ck::classify(m.canonical) == ck::ActionClass::MixedSplit) check(m.matrix);
  if (o.ok)
    o.detail = std::to_string(runs) + " split runs, " + std::to_string(flags) + " localized torsion flags, all false";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t members = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& m : oc::involution_corpus(n, 8000 + n, 25).members) {
      const auto L = ck::validate_involution(m.matrix);
      const auto d = ck::k_ranks_delocalized(L);
      o.require(ck::hexagon_alternating_sum(n, ck::twisted_ranks(L), d.k0, d.k1) == 0,
                "hexagon sum nonzero: " + ck::to_string(m.matrix));
      ++members;
    }
  if (o.ok) o.detail = std::to_string(members) + " members, alternating sum 0";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const IntMatrix swap{{0, 1}, {1, 0}};
  const auto L = ck::validate_involution(swap);
  const auto d = ck::k_ranks_delocalized(L);
  const auto q = oc::rational_ranks_by_oracles(swap);
  const auto full = ck::integral_k_theory(L);
  o.require(d.k0 == 2 && d.k1 == 2, "delocalized route");
  o.require(q.k0 == 2 && q.k1 == 2, "exterior/grid oracle route");
  o.require(full.scope == ck::ScopeFlag::RationalOnly, "not flagged RationalOnly");
  o.require(full.caveat && full.caveat->find("3*2^(n-2) does not apply") != std::string::npos,
            "caveat does not record that the closed form does not apply");
  if (o.ok) o.detail = "swap: (2,2) from delocalized and oracle routes, RationalOnly with caveat";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {1, criterion1, 1.0},   {2, criterion2, 10.0}, {3, criterion3, 0.0},  {4, criterion4, 60.0}, {5, criterion5, 300.0},
      {6, criterion6, 0.0},   {7, criterion7, 0.0},  {8, criterion8, 0.0},  {9, criterion9, 0.0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.ok = false;
      o.detail += " (over time budget " + std::to_string(c.budget_s) + " s)";
    }
    std::ostringstream line;
    line << "criterion " << c.id << ": " << (o.ok ? "PASS" : "FAIL") << " [" << std::fixed;
    line.precision(3);
    line << secs << " s] " << o.detail;
    std::cout << line.str() << std::endl;
    all = all && o.ok;
  }
  return all ? 0 : 1;
}
