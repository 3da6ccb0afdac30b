#include <gtest/gtest.h>

#include <set>

#include "rasl/grs.hpp"
#include "rasl/subfield.hpp"
#include "rasl/roots.hpp"

using namespace rasl;

namespace {
const Field& gf13() { return FieldRegistry::instance().get(13, 1); }

GrsCode worked_code() {
  const Field& f = gf13();
  return GrsCode(f, 2, {f.from_int(1), f.from_int(8), f.from_int(12), f.from_int(5)});
}
}  // namespace

TEST(GrsEncode, ConstantsScaleByMultipliers) {
  const Field& f = gf13();
  GrsCode code(f, 2, {f.from_int(1), f.from_int(8)}, {f.from_int(3), f.from_int(4)});
  auto word = grs_encode(code, Poly<Field>::constant(f, f.from_int(2)));
  EXPECT_EQ(f.to_index(word[0]), 6u);
  EXPECT_EQ(f.to_index(word[1]), 8u);
}

TEST(GrsEncode, WorkedRow) {
  const Field& f = gf13();
  auto word = grs_encode(worked_code(), Poly<Field>(f, {f.from_int(11), f.from_int(10)}));
  std::vector<std::uint64_t> got;
  for (auto& e : word) got.push_back(f.to_index(e));
  EXPECT_EQ(got, (std::vector<std::uint64_t>{8, 0, 1, 9}));
}

TEST(GrsEncode, ZeroPolynomial) {
  const Field& f = gf13();
  for (auto& e : grs_encode(worked_code(), Poly<Field>(f))) EXPECT_TRUE(f.is_zero(e));
}

TEST(GrsEncode, DegreeGuard) {
  const Field& f = gf13();
  EXPECT_THROW(grs_encode(worked_code(), Poly<Field>(f, {f.one(), f.one(), f.one()})),
               std::invalid_argument);
}

TEST(DualMultipliers, WorkedValue) {
  const Field& f = gf13();
  auto theta = dual_multipliers(worked_code());
  // (1-8)(1-12)(1-5) = (-7)(-11)(-4) = -308 = 4 mod 13; 4^{-1} = 10
  EXPECT_EQ(f.to_index(theta[0]), 10u);
}

TEST(DualMultipliers, TwoPointCode) {
  const Field& f = gf13();
  GrsCode code(f, 1, {f.from_int(3), f.from_int(7)});
  auto theta = dual_multipliers(code);
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    auto c = grs_encode(code, Poly<Field>::constant(f, f.random(rng)));
    EXPECT_TRUE(f.is_zero(f.add(f.mul(theta[0], c[0]), f.mul(theta[1], c[1]))));
  }
}

TEST(DualMultipliers, RandomDrawsVerify) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const Field& f = t % 2 ? gf13() : FieldRegistry::instance().get(2, 6);
    std::uint64_t q = f.order().as_u64();
    std::size_t n = 3 + rng.below(4);
    std::set<std::uint64_t> used;
    std::vector<Element> y;
    while (y.size() < n) {
      auto idx = rng.below(q);
      if (used.insert(idx).second) y.push_back(f.from_index(idx));
    }
    GrsCode code(f, 1 + rng.below(n - 1), y);
    EXPECT_NO_THROW(dual_multipliers(code));  // internal inner-product check
  }
}

TEST(Duality, WeightedPowerSumsVanish) {
  // sum_j theta_j y_j^u f(y_j) = 0 for deg f < m1, u < m2
  const Field& f = gf13();
  auto code = worked_code();
  auto theta = dual_multipliers(code);
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    Poly<Field> msg(f, {f.random(rng), f.random(rng)});
    auto word = grs_encode(code, msg);
    for (std::uint64_t u = 0; u < 2; ++u) {
      Element acc = f.zero();
      for (std::size_t j = 0; j < 4; ++j)
        acc = f.add(acc, f.mul(f.mul(theta[j], f.pow(code.locators[j], u)), word[j]));
      ASSERT_TRUE(f.is_zero(acc));
    }
  }
}

TEST(ErasureDecode, WorkedRoundTrip) {
  const Field& f = gf13();
  auto code = worked_code();
  Poly<Field> msg(f, {f.from_int(11), f.from_int(10)});
  auto word = grs_encode(code, msg);
  std::vector<std::pair<std::size_t, Element>> known;
  for (std::size_t i = 0; i < 4; ++i) known.push_back({i, word[i]});
  EXPECT_EQ(grs_erasure_decode(code, known), msg);
}

TEST(ErasureDecode, TooFewPositionsThrows) {
  const Field& f = gf13();
  auto code = worked_code();
  std::vector<std::pair<std::size_t, Element>> known{{0, f.one()}};
  EXPECT_THROW(grs_erasure_decode(code, known), std::invalid_argument);
}

TEST(ErasureDecode, SurplusInconsistencyIsCorruption) {
  const Field& f = gf13();
  auto code = worked_code();
  auto word = grs_encode(code, Poly<Field>(f, {f.from_int(1), f.from_int(2)}));
  word[3] = f.add(word[3], f.one());
  std::vector<std::pair<std::size_t, Element>> known;
  for (std::size_t i = 0; i < 4; ++i) known.push_back({i, word[i]});
  EXPECT_THROW(grs_erasure_decode(code, known), std::runtime_error);
}

TEST(ErasureDecode, AllSupportsOfSmallCode) {
  const Field& f = gf13();
  auto code = worked_code();
  Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    Poly<Field> msg(f, {f.random(rng), f.random(rng)});
    auto word = grs_encode(code, msg);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        std::vector<std::pair<std::size_t, Element>> known{{i, word[i]}, {j, word[j]}};
        ASSERT_EQ(grs_erasure_decode(code, known), msg);
      }
  }
}
