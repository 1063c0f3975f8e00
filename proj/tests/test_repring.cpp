#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "crystalk/oracle.hpp"
#include "crystalk/repring.hpp"

using crystalk::ModuleClass;
using crystalk::PrimeSite;
using crystalk::RModuleSum;

namespace {

RModuleSum of(ModuleClass c, std::uint64_t k = 1) { return RModuleSum::of(c, k); }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(RModuleSum, Rank) {
  EXPECT_EQ(of(ModuleClass::FreeR).rank(), 2u);
  EXPECT_EQ((of(ModuleClass::TrivZ) + of(ModuleClass::SignZ, 2)).rank(), 3u);
  EXPECT_EQ(of(ModuleClass::TorF2, 3).rank(), 0u);
  EXPECT_EQ(crystalk::to_string(of(ModuleClass::TrivZ) + of(ModuleClass::SignZ, 2)), "TrivZ + SignZ^2");
  EXPECT_EQ(crystalk::to_string(RModuleSum{}), "0");
}

TEST(Tensor, Examples) {
  EXPECT_EQ(crystalk::tensor(of(ModuleClass::FreeR), of(ModuleClass::SignZ)), of(ModuleClass::SignZ));
  EXPECT_EQ(crystalk::tensor(of(ModuleClass::TrivZ), of(ModuleClass::SignZ)), of(ModuleClass::TorF2));
  // R/J (x)_R R/J = R/J
  EXPECT_EQ(crystalk::tensor(of(ModuleClass::SignZ), of(ModuleClass::SignZ)), of(ModuleClass::SignZ));
  EXPECT_EQ(crystalk::tensor(of(ModuleClass::TrivZ), of(ModuleClass::TrivZ)), of(ModuleClass::TrivZ));
}

TEST(Tensor, BilinearAndSymmetric) {
  const auto M = of(ModuleClass::FreeR, 2) + of(ModuleClass::TrivZ);
  const auto N = of(ModuleClass::SignZ, 3) + of(ModuleClass::TorF2);
  EXPECT_EQ(crystalk::tensor(M, N), crystalk::tensor(N, M));
  EXPECT_EQ(crystalk::tensor(M, N), of(ModuleClass::SignZ, 6) + of(ModuleClass::TorF2, 2) + of(ModuleClass::TorF2, 3) +
                                        of(ModuleClass::TorF2, 1));
  for (auto x : crystalk::kModuleClasses)
    for (auto y : crystalk::kModuleClasses) {
      EXPECT_EQ(crystalk::tensor(of(x), of(y)), crystalk::tensor(of(y), of(x)));
      EXPECT_EQ(crystalk::tor1(of(x), of(y)), crystalk::tor1(of(y), of(x)));
    }
}

TEST(Tor1, Examples) {
  for (auto c : crystalk::kModuleClasses) EXPECT_TRUE(crystalk::tor1(of(ModuleClass::FreeR), of(c)).is_zero());
  EXPECT_EQ(crystalk::tor1(of(ModuleClass::TrivZ), of(ModuleClass::TrivZ)), of(ModuleClass::TorF2));
  EXPECT_TRUE(crystalk::tor1(of(ModuleClass::TrivZ), of(ModuleClass::SignZ)).is_zero());
}

TEST(Localize, Examples) {
  const auto a = crystalk::localize(of(ModuleClass::SignZ), PrimeSite::min_minus());
  EXPECT_EQ(a.free_rank, 1u);
  EXPECT_FALSE(a.torsion_flag);
  const auto b = crystalk::localize(of(ModuleClass::TrivZ), PrimeSite::min_minus());
  EXPECT_EQ(b.free_rank, 0u);
  EXPECT_FALSE(b.torsion_flag);
  const auto c = crystalk::localize(of(ModuleClass::TorF2), PrimeSite::odd_plus(3));
  EXPECT_EQ(c.free_rank, 0u);
  EXPECT_FALSE(c.torsion_flag);
  const auto d = crystalk::localize(of(ModuleClass::TorF2), PrimeSite::dyadic());
  EXPECT_TRUE(d.torsion_flag);
  EXPECT_EQ(d.torsion_factors, std::vector<std::uint64_t>{2});
  EXPECT_TRUE(crystalk::localize(of(ModuleClass::FreeR), PrimeSite::dyadic()).non_regular);
}

TEST(Localize, RationalRanksAddUp) {
  // R (x) Q = Q x Q: the ranks at the two minimal primes sum to the Z-rank.
  for (auto c : crystalk::kModuleClasses) {
    const auto M = of(c, 3);
    EXPECT_EQ(crystalk::localize(M, PrimeSite::min_plus()).free_rank +
                  crystalk::localize(M, PrimeSite::min_minus()).free_rank,
              M.rank());
  }
}

TEST(PrimeSite, RejectsBadPrimes) {
  EXPECT_THROW(PrimeSite::odd_plus(2), std::invalid_argument);
  EXPECT_THROW(PrimeSite::odd_minus(9), std::invalid_argument);
  EXPECT_EQ(PrimeSite::odd_minus(5).name(), "OddMinus(5)");
  EXPECT_TRUE(PrimeSite::dyadic().contains_I());
  EXPECT_TRUE(PrimeSite::dyadic().contains_J());
  EXPECT_FALSE(PrimeSite::min_plus().contains_J());
}

TEST(MultOneMinusT, Examples) {
  const auto r = crystalk::mult_one_minus_t(of(ModuleClass::FreeR));
  EXPECT_EQ(r.kernel, of(ModuleClass::TrivZ));
  EXPECT_EQ(r.image, of(ModuleClass::SignZ));
  const auto z = crystalk::mult_one_minus_t(of(ModuleClass::TrivZ));
  EXPECT_EQ(z.kernel, of(ModuleClass::TrivZ));
  EXPECT_TRUE(z.image.is_zero());
  const auto zm = crystalk::mult_one_minus_t(of(ModuleClass::SignZ));
  EXPECT_TRUE(zm.kernel.is_zero());
  EXPECT_EQ(zm.image, of(ModuleClass::SignZ));
  EXPECT_EQ(zm.image_index, 2u);
}

TEST(Tables, BuiltinMatchesResolutionOracle) {
  EXPECT_EQ(crystalk::oracle::generate_tables({3, 5, 7}), crystalk::builtin_tables());
}

TEST(Tables, RenderParseRoundTrip) {
  const auto text = crystalk::render_tables(crystalk::builtin_tables());
  EXPECT_EQ(crystalk::parse_tables(text), crystalk::builtin_tables());
  EXPECT_EQ(crystalk::render_tables(crystalk::parse_tables(text)), text);
}

TEST(Tables, FrozenFileIsByteIdentical) {
  const auto frozen = read_file(CRYSTALK_TABLE_FILE);
  ASSERT_FALSE(frozen.empty());
  EXPECT_EQ(frozen, crystalk::render_tables(crystalk::oracle::generate_tables()));
  EXPECT_EQ(crystalk::load_tables(CRYSTALK_TABLE_FILE), crystalk::builtin_tables());
}

TEST(Tables, ChecksumDetectsTampering) {
  auto text = crystalk::render_tables(crystalk::builtin_tables());
  const auto pos = text.find("\"free_rank\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 14, "\"free_rank\": 2");
  EXPECT_THROW(crystalk::parse_tables(text), std::runtime_error);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(crystalk::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
