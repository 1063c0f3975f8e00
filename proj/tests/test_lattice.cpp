#include <gtest/gtest.h>

#include "crystalk/lattice.hpp"
#include "crystalk/oracle.hpp"

using crystalk::ActionClass;
using crystalk::Block;
using crystalk::IntMatrix;
using crystalk::StructureInvariants;

namespace {

crystalk::InvolutiveLattice lat(IntMatrix A) { return crystalk::validate_involution(std::move(A)); }

IntMatrix diag(std::initializer_list<long> d) {
  IntMatrix M = IntMatrix::identity(d.size());
  std::size_t i = 0;
  for (long x : d) M(i, i) = x, ++i;
  return M;
}

}  // namespace

TEST(ValidateInvolution, AcceptsAndRejects) {
  EXPECT_NO_THROW(lat(IntMatrix{{0, 1}, {1, 0}}));
  try {
    lat(IntMatrix{{1, 1}, {0, 1}});
    FAIL();
  } catch (const crystalk::InvolutionError& e) {
    EXPECT_EQ(e.kind(), crystalk::InvolutionErrorKind::NotInvolution);
    EXPECT_EQ(e.row(), 0u);
    EXPECT_EQ(e.col(), 1u);
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
  }
  try {
    lat(IntMatrix{{2}});
    FAIL();
  } catch (const crystalk::InvolutionError& e) {
    EXPECT_EQ(e.kind(), crystalk::InvolutionErrorKind::NotInvolution);
    EXPECT_NE(std::string(e.what()).find("got 4"), std::string::npos);
  }
  try {
    lat(IntMatrix{{1, 0, 0}, {0, 1, 0}});
    FAIL();
  } catch (const crystalk::InvolutionError& e) {
    EXPECT_EQ(e.kind(), crystalk::InvolutionErrorKind::NotSquare);
  }
}

TEST(Invariants, Examples) {
  EXPECT_EQ(crystalk::invariants(lat(diag({1, -1}))), (StructureInvariants{1, 1, 0}));
  EXPECT_EQ(crystalk::invariants(lat(IntMatrix{{0, 1}, {1, 0}})), (StructureInvariants{0, 0, 1}));
  EXPECT_EQ(crystalk::invariants(lat(diag({-1, -1, -1}))), (StructureInvariants{0, 3, 0}));
  // [[1,1],[0,-1]] is conjugate to the swap
  EXPECT_EQ(crystalk::invariants(lat(IntMatrix{{1, 1}, {0, -1}})), (StructureInvariants{0, 0, 1}));
}

TEST(Classify, Examples) {
  EXPECT_EQ(crystalk::classify(lat(diag({-1, -1, -1, -1, -1}))), ActionClass::FreeOutsideOrigin);
  EXPECT_EQ(crystalk::classify(lat(diag({1, 1, -1, -1, -1}))), ActionClass::MixedSplit);
  EXPECT_EQ(crystalk::classify(lat(IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})), ActionClass::MixedNonSplit);
  EXPECT_EQ(crystalk::classify(lat(IntMatrix::identity(3))), ActionClass::Trivial);
  EXPECT_EQ(crystalk::classify(lat(diag({-1}))), ActionClass::FreeOutsideOrigin);
}

TEST(Classify, StringRoundTrip) {
  for (auto c : {ActionClass::Trivial, ActionClass::FreeOutsideOrigin, ActionClass::MixedSplit,
                 ActionClass::MixedNonSplit})
    EXPECT_EQ(crystalk::action_class_from_string(crystalk::to_string(c)), c);
  EXPECT_THROW(crystalk::action_class_from_string("Bogus"), std::invalid_argument);
}

TEST(Decompose, CanonicalInputGivesIdentity) {
  const auto d = crystalk::decompose(lat(diag({1, -1})));
  EXPECT_EQ(d.basis, IntMatrix::identity(2));
  EXPECT_EQ(d.blocks, (std::vector<Block>{Block::Triv, Block::Sign}));
}

TEST(Decompose, ReordersSignBeforeTrivial) {
  const auto d = crystalk::decompose(lat(diag({-1, 1})));
  EXPECT_EQ(d.blocks, (std::vector<Block>{Block::Triv, Block::Sign}));
  EXPECT_EQ(d.basis, (IntMatrix{{0, 1}, {1, 0}}));
}

TEST(Decompose, ConjugatedSwap) {
  const IntMatrix P{{2, 1}, {1, 1}};
  const IntMatrix A = P * IntMatrix{{0, 1}, {1, 0}} * crystalk::unimodular_inverse(P);
  const auto d = crystalk::decompose(lat(A));
  EXPECT_EQ(d.blocks, std::vector<Block>{Block::Reg});
  EXPECT_EQ(crystalk::unimodular_inverse(d.basis) * A * d.basis, (IntMatrix{{0, 1}, {1, 0}}));
}

TEST(Decompose, RecomposesEveryCorpusMember) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto corpus = crystalk::oracle::involution_corpus(n, 2024 + n, 6);
    for (const auto& m : corpus.members) {
      const auto L = lat(m.matrix);
      const auto d = crystalk::decompose(L);
      ASSERT_TRUE(crystalk::is_unimodular(d.basis)) << m.matrix;
      EXPECT_EQ(crystalk::unimodular_inverse(d.basis) * m.matrix * d.basis, crystalk::canonical_matrix(m.canonical))
          << m.matrix;
      EXPECT_EQ(d.invariants, m.canonical);
      EXPECT_EQ(crystalk::invariants(L), m.canonical);
      EXPECT_EQ(d.blocks.size(), m.canonical.a + m.canonical.b + m.canonical.c);
    }
  }
}

TEST(Invariants, SumConstraintAndConjugationInvariance) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (const auto& inv : crystalk::oracle::canonical_classes(n)) {
      EXPECT_EQ(inv.n(), n);
      const IntMatrix C = crystalk::canonical_matrix(inv);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto P = crystalk::random_unimodular(n, seed * 31 + n, 5 * n);
        EXPECT_EQ(crystalk::invariants(lat(P * C * crystalk::unimodular_inverse(P))), inv);
      }
    }
}

TEST(CanonicalMatrix, BlockLayout) {
  EXPECT_EQ(crystalk::canonical_matrix({1, 1, 1}),
            (IntMatrix{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}));
}
