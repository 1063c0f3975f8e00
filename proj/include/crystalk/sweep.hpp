#pragma once

// Runs every oracle against a generated corpus and tallies the results.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crystalk/lattice.hpp"
#include "crystalk/oracle.hpp"
#include "crystalk/repring.hpp"
#include "crystalk/toruskt.hpp"

namespace crystalk::oracle {

struct RankPairU64 {
  std::uint64_t k0 = 0, k1 = 0;
  friend bool operator==(const RankPairU64&, const RankPairU64&) = default;
};

struct CheckTally {
  std::string name;
  std::size_t passed = 0, failed = 0, skipped = 0;
  std::vector<std::string> failures;
  std::string skip_reason;

  void record(bool ok, const std::string& what) {
    if (ok) {
      ++passed;
    } else {
      ++failed;
      if (failures.size() < 10) failures.push_back(what);
    }
  }
};

struct SweepSummary {
  std::size_t n = 0, members = 0, rational_only = 0;
  std::vector<CheckTally> checks;
  bool grid_bound_error = false;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.failed) return false;
    return true;
  }
};

inline constexpr std::size_t kMaxGridDim = 6;

/// Rational ranks from the brute-force oracles alone: invariants of the
/// explicit action on the exterior algebra plus the fixed set counted on the
/// 4- and 8-torsion grids. Independent of the trace polynomial and SNF.
inline RankPairU64 rational_ranks_by_oracles(const IntMatrix& A) {
  if (A.rows() > kMaxGridDim) throw GridTooLarge("grid oracle supports n <= " + std::to_string(kMaxGridDim));
  const auto coh = exterior_action_invariants(A);
  const auto g = fixed_grid_components(A, 4);
  const FixedSetDescription fix{g.dim, g.components};
  return {coh.even_inv + fix.k_even(), coh.odd_inv + fix.k_odd()};
}

inline SweepSummary sweep(const Corpus& corpus, const ModuleTables& tables = builtin_tables()) {
  SweepSummary s;
  s.n = corpus.n;
  s.members = corpus.members.size();
  CheckTally involution{"involution"}, invariant{"invariants"}, decomposition{"decomposition"},
      exterior{"exterior_vs_trace"}, grid{"grid_vs_snf"}, routes{"route_agreement"},
      conjugation{"conjugation_invariance"}, hexagon{"hexagon"}, table{"module_tables"};

  const bool run_exterior = corpus.n <= kMaxExteriorDim;
  const bool run_grid = corpus.n <= kMaxGridDim;
  if (!run_exterior) exterior.skip_reason = "n > " + std::to_string(kMaxExteriorDim);
  if (!run_grid) {
    grid.skip_reason = "bound error: n > " + std::to_string(kMaxGridDim);
    s.grid_bound_error = true;
  }

  std::map<StructureInvariants, KRankReport> by_class;
  for (std::size_t i = 0; i < corpus.members.size(); ++i) {
    const auto& m = corpus.members[i];
    const std::string tag = "member " + std::to_string(i) + " " + to_string(m.matrix);
    std::optional<InvolutiveLattice> L;
    try {
      L = validate_involution(m.matrix);
      involution.record(true, tag);
    } catch (const InvolutionError& e) {
      involution.record(false, tag + ": " + e.what());
      continue;
    }
    try {
      const auto inv = invariants(*L);
      invariant.record(inv == m.canonical, tag);
      const auto dec = decompose(*L);
      decomposition.record(dec.invariants == m.canonical && is_unimodular(dec.basis), tag);
      if (inv.c > 0) ++s.rational_only;

      const auto coh = cohomology_invariants(*L);
      const auto fix = fixed_set(*L);
      if (run_exterior)
        exterior.record(exterior_action_invariants(m.matrix) == coh, tag);
      else
        ++exterior.skipped;
      if (run_grid) {
        const auto g = fixed_grid_components(m.matrix, 4);
        grid.record(g.components == fix.components && g.dim == fix.dim, tag);
      } else {
        ++grid.skipped;
      }

      const auto deloc = k_ranks_delocalized(*L);
      if (classify(inv) == ActionClass::MixedSplit) {
        const auto kun = kunneth_assembly(*L, tables);
        routes.record(kun.k0 == deloc.k0 && kun.k1 == deloc.k1, tag);
      } else if (inv.c > 0 && run_grid) {
        routes.record(rational_ranks_by_oracles(m.matrix) == RankPairU64{deloc.k0, deloc.k1}, tag);
      } else {
        ++routes.skipped;
      }
      const auto full = integral_k_theory(*L, tables);
      auto [it, fresh] = by_class.emplace(m.canonical, full);
      conjugation.record(fresh || it->second == full, tag);
      hexagon.record(hexagon_alternating_sum(corpus.n, twisted_ranks(coh, fix), deloc.k0, deloc.k1) == 0, tag);
    } catch (const std::exception& e) {
      invariant.record(false, tag + ": exception " + e.what());
    }
  }
  table.record(generate_tables(tables.odd_primes_checked) == tables, "regenerated tables");

  s.checks = {involution, invariant, decomposition, exterior, grid, routes, conjugation, hexagon, table};
  return s;
}

}  // namespace crystalk::oracle
