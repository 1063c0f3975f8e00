#include <gtest/gtest.h>

#include "crystalk/oracle.hpp"
#include "crystalk/toruskt.hpp"

using crystalk::IntMatrix;
using crystalk::ModuleClass;
using crystalk::RModuleSum;
using crystalk::ScopeFlag;

namespace {

crystalk::InvolutiveLattice lat(IntMatrix A) { return crystalk::validate_involution(std::move(A)); }

IntMatrix split(std::size_t r, std::size_t n) {
  IntMatrix A = IntMatrix::identity(n);
  for (std::size_t i = r; i < n; ++i) A(i, i) = -1;
  return A;
}

const IntMatrix kSwap{{0, 1}, {1, 0}};

}  // namespace

TEST(FixedSet, Examples) {
  EXPECT_EQ(crystalk::fixed_set(lat(IntMatrix{{-1}})), (crystalk::FixedSetDescription{0, 2}));
  EXPECT_EQ(crystalk::fixed_set(lat(kSwap)), (crystalk::FixedSetDescription{1, 1}));
  EXPECT_EQ(crystalk::fixed_set(lat(IntMatrix::identity(3))), (crystalk::FixedSetDescription{3, 1}));
  EXPECT_EQ(crystalk::fixed_set(lat(split(2, 5))), (crystalk::FixedSetDescription{2, 8}));
}

TEST(CohomologyInvariants, Examples) {
  const auto pm = crystalk::cohomology_invariants(lat(split(1, 2)));
  EXPECT_EQ(pm.even_inv, 1u);
  EXPECT_EQ(pm.odd_inv, 1u);
  const auto m2 = crystalk::cohomology_invariants(lat(split(0, 2)));
  EXPECT_EQ(m2.even_inv, 2u);
  EXPECT_EQ(m2.odd_inv, 0u);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto id = crystalk::cohomology_invariants(lat(IntMatrix::identity(n)));
    EXPECT_EQ(id.even_inv, crystalk::pow2(n - 1));
    EXPECT_EQ(id.odd_inv, crystalk::pow2(n - 1));
    EXPECT_EQ(id.even_anti + id.odd_anti, 0u);
  }
  const auto sw = crystalk::cohomology_invariants(lat(kSwap));
  EXPECT_EQ(sw.even_inv, 1u);
  EXPECT_EQ(sw.odd_inv, 1u);
}

TEST(TwistedRanks, Examples) {
  // one-point space: H^0 invariant, fixed set a point
  EXPECT_EQ(crystalk::twisted_ranks(crystalk::CohomologyAction{1, 0, 0, 0}, crystalk::FixedSetDescription{0, 1}),
            (crystalk::TwistedRanks{1, 0}));
  EXPECT_EQ(crystalk::twisted_ranks(lat(IntMatrix{{-1}})), (crystalk::TwistedRanks{3, 0}));
  const auto tw = crystalk::twisted_ranks(lat(IntMatrix{{1}}));
  EXPECT_EQ(tw, (crystalk::TwistedRanks{1, 1}));
  const auto d = crystalk::k_ranks_delocalized(lat(IntMatrix{{1}}));
  EXPECT_EQ(crystalk::hexagon_alternating_sum(1, tw, d.k0, d.k1), 0);
}

TEST(DelocalizedRanks, ClosedForms) {
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto f = crystalk::k_ranks_delocalized(lat(split(0, n)));
    EXPECT_EQ(f.k0, 3 * crystalk::pow2(n - 1));
    EXPECT_EQ(f.k1, 0u);
    const auto t = crystalk::k_ranks_delocalized(lat(IntMatrix::identity(n)));
    EXPECT_EQ(t.k0, crystalk::pow2(n));
    EXPECT_EQ(t.k1, crystalk::pow2(n));
    for (std::size_t r = 1; r < n; ++r) {
      const auto s = crystalk::k_ranks_delocalized(lat(split(r, n)));
      EXPECT_EQ(s.k0, 3 * crystalk::pow2(n - 2)) << n << " " << r;
      EXPECT_EQ(s.k1, 3 * crystalk::pow2(n - 2)) << n << " " << r;
    }
  }
  const auto sw = crystalk::k_ranks_delocalized(lat(kSwap));
  EXPECT_EQ(sw.k0, 2u);
  EXPECT_EQ(sw.k1, 2u);
  EXPECT_EQ(sw.scope, ScopeFlag::RationalOnly);
}

TEST(KunnethAssembly, PmTypeHasFiveStepCertificate) {
  const auto k = crystalk::kunneth_assembly(lat(split(1, 2)));
  EXPECT_EQ(k.k0, 3u);
  EXPECT_EQ(k.k1, 3u);
  ASSERT_TRUE(k.certificate);
  ASSERT_EQ(k.certificate->size(), 5u);
  const std::vector<std::string> steps{"decomposition", "localized_kunneth", "tor_vanishing", "zt_argument",
                                       "rank_formula"};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ((*k.certificate)[i].step, steps[i]);
  EXPECT_EQ(k.scope, ScopeFlag::ClosedForm);
}

TEST(KunnethAssembly, SplitRanks) {
  const auto k = crystalk::kunneth_assembly(lat(split(2, 3)));
  EXPECT_EQ(k.k0, 6u);
  EXPECT_EQ(k.k1, 6u);
  const auto conj = crystalk::oracle::involution_corpus(4, 9, 3);
  for (const auto& m : conj.members) {
    if (crystalk::classify(m.canonical) != crystalk::ActionClass::MixedSplit) continue;
    const auto L = lat(m.matrix);
    const auto a = crystalk::kunneth_assembly(L), d = crystalk::k_ranks_delocalized(L);
    EXPECT_EQ(a.k0, d.k0);
    EXPECT_EQ(a.k1, d.k1);
  }
}

TEST(KunnethAssembly, RejectsOutOfScope) {
  EXPECT_THROW(crystalk::kunneth_assembly(lat(kSwap)), crystalk::ScopeError);
  EXPECT_THROW(crystalk::kunneth_assembly(lat(IntMatrix::identity(2))), crystalk::ScopeError);
  EXPECT_THROW(crystalk::kunneth_assembly(lat(split(0, 2))), crystalk::ScopeError);
}

TEST(IntegralKTheory, Examples) {
  const auto d = crystalk::integral_k_theory(lat(IntMatrix{{-1}}));
  EXPECT_EQ(d.k0, 3u);
  EXPECT_EQ(d.k1, 0u);
  ASSERT_TRUE(d.module_structure);
  EXPECT_EQ(d.module_structure->k0, RModuleSum::of(ModuleClass::TrivZ) + RModuleSum::of(ModuleClass::SignZ, 2));
  EXPECT_TRUE(d.module_structure->k1.is_zero());

  const auto s = crystalk::integral_k_theory(lat(split(1, 4)));
  EXPECT_EQ(s.k0, 12u);
  EXPECT_EQ(s.k1, 12u);

  const auto sw = crystalk::integral_k_theory(lat(kSwap));
  EXPECT_EQ(sw.k0, 2u);
  EXPECT_EQ(sw.k1, 2u);
  EXPECT_EQ(sw.scope, ScopeFlag::RationalOnly);
  ASSERT_TRUE(sw.caveat);
  EXPECT_NE(sw.caveat->find("3*2^(n-2) does not apply"), std::string::npos);
  EXPECT_FALSE(sw.certificate);
}

TEST(IntegralKTheory, TrivialAction) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto t = crystalk::integral_k_theory(lat(IntMatrix::identity(n)));
    EXPECT_EQ(t.k0, crystalk::pow2(n));
    EXPECT_EQ(t.k1, crystalk::pow2(n));
    EXPECT_EQ(t.module_structure->k0, RModuleSum::of(ModuleClass::FreeR, crystalk::pow2(n - 1)));
  }
}

TEST(GroupCStar, Examples) {
  const auto a = crystalk::group_cstar_k(lat(split(0, 2)));
  EXPECT_EQ(a.k_homology0, 6u);
  EXPECT_EQ(a.k_homology1, 0u);
  EXPECT_TRUE(a.integral);
  const auto b = crystalk::group_cstar_k(lat(split(1, 2)));
  EXPECT_EQ(b.k_homology0, 3u);
  EXPECT_EQ(b.k_homology1, 3u);
  EXPECT_TRUE(b.integral);
  const auto c = crystalk::group_cstar_k(lat(kSwap));
  EXPECT_FALSE(c.integral);
  EXPECT_EQ(c.scope, ScopeFlag::RationalOnly);
  EXPECT_TRUE(c.caveat);
}

TEST(GroupCStar, ConjugationInvariant) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto corpus = crystalk::oracle::involution_corpus(n, 77, 4);
    for (const auto& m : corpus.members) {
      const auto ref = crystalk::group_cstar_k(lat(crystalk::canonical_matrix(m.canonical)));
      EXPECT_EQ(crystalk::group_cstar_k(lat(m.matrix)), ref) << m.matrix;
    }
  }
}

TEST(Hexagon, VanishesOnCorpus) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto corpus = crystalk::oracle::involution_corpus(n, 3, 3);
    for (const auto& m : corpus.members) {
      const auto L = lat(m.matrix);
      const auto d = crystalk::k_ranks_delocalized(L);
      EXPECT_EQ(crystalk::hexagon_alternating_sum(n, crystalk::twisted_ranks(L), d.k0, d.k1), 0);
    }
  }
}

TEST(ScopeFlag, WireNames) {
  EXPECT_EQ(crystalk::to_string(ScopeFlag::ClosedForm), "PaperValidated");
  EXPECT_EQ(crystalk::scope_flag_from_string("RationalOnly"), ScopeFlag::RationalOnly);
  EXPECT_THROW(crystalk::scope_flag_from_string("maybe"), std::invalid_argument);
}
