#pragma once

// Named example lattices with their expected K_*(C*_r(Z^n x| Z/2)) ranks.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crystalk/intlin.hpp"
#include "crystalk/toruskt.hpp"

namespace crystalk {

struct CatalogEntry {
  std::string name;
  std::size_t n;
  IntMatrix matrix;
  std::uint64_t expected_k0, expected_k1;
  ScopeFlag expected_scope;
  // "closed_form": value of the closed-form theorems; "derived": computed
  // independently (by hand and by the oracles).
  std::string provenance;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"infinite-dihedral", 1, IntMatrix{{-1}}, 3, 0, ScopeFlag::ClosedForm, "closed_form"},
      {"p2-type", 2, IntMatrix{{-1, 0}, {0, -1}}, 6, 0, ScopeFlag::ClosedForm, "closed_form"},
      {"pm-type", 2, IntMatrix{{1, 0}, {0, -1}}, 3, 3, ScopeFlag::ClosedForm, "closed_form"},
      {"cm-swap", 2, IntMatrix{{0, 1}, {1, 0}}, 2, 2, ScopeFlag::RationalOnly, "derived"},
      {"trivial-z2", 2, IntMatrix{{1, 0}, {0, 1}}, 4, 4, ScopeFlag::ClosedForm, "derived"},
      {"free-n3", 3, IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, 12, 0, ScopeFlag::ClosedForm, "closed_form"},
      {"split-n3-r2", 3, IntMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}, 6, 6, ScopeFlag::ClosedForm, "closed_form"},
      {"split-n4-r1", 4, IntMatrix{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}, 12, 12,
       ScopeFlag::ClosedForm, "closed_form"},
      {"swap-plus-trivial", 3, IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, 4, 4, ScopeFlag::RationalOnly, "derived"},
      {"swap-plus-sign", 3, IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}, 4, 4, ScopeFlag::RationalOnly, "derived"},
  };
  return entries;
}

inline const CatalogEntry* find_catalog_entry(std::string_view name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace crystalk
