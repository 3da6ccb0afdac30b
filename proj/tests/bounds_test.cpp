#include <gtest/gtest.h>

#include "rasl/bounds.hpp"
#include "rasl/flowgraph.hpp"
#include "rasl/rng.hpp"

using namespace rasl;
using namespace rasl::bounds;

TEST(Singleton, WorkedAndDegenerate) {
  EXPECT_EQ(singleton_locality_bound(12, 4, 2, 2), 8);
  EXPECT_EQ(singleton_locality_bound(10, 4, 2, 1), 7);   // delta = 1: plain Singleton
  EXPECT_EQ(singleton_locality_bound(10, 4, 4, 3), 7);   // r = k: single group
}

TEST(CutsetMds, Examples) {
  EXPECT_EQ(cutset_mds(4, 2, 4, 1), Rational(16, 3));
  EXPECT_EQ(cutset_mds(2, 2, 4, 1), Rational(8));  // D = K: full download
  EXPECT_EQ(cutset_mds(3, 2, 1, 1), Rational(3, 2));
  EXPECT_THROW(cutset_mds(2, 3, 4, 1), std::invalid_argument);
  EXPECT_THROW(cutset_mds(3, 2, 4, 0), std::invalid_argument);
}

TEST(CutsetLocality, Examples) {
  EXPECT_EQ(cutset_locality(3, 2, 2), Rational(3));
  EXPECT_EQ(cutset_locality(2, 2, 3), Rational(6));  // D = K -> K r
  // r = L recovers the MDS cut-set with one erasure
  EXPECT_EQ(cutset_locality(4, 2, 4), cutset_mds(4, 2, 4, 1));
  EXPECT_THROW(cutset_locality(1, 2, 2), std::invalid_argument);
}

TEST(PartialCutset, Examples) {
  EXPECT_EQ(partial_cutset(3, 2, 2, 2), Rational(3, 2));
  EXPECT_EQ(partial_cutset(3, 2, 1, 2), Rational(0));  // below delta
  // e = L reduces to the locality cut-set
  EXPECT_EQ(partial_cutset(3, 2, 3, 2), cutset_locality(3, 2, 2));
  EXPECT_THROW(partial_cutset(2, 2, 2, 2), std::invalid_argument);
}

TEST(Capacity, WorkedExamples) {
  // K=3, D=4, r=4, beta=2, s=0: 12
  EXPECT_EQ(capacity_c(5, 3, 4, Rational(2), {0, 0, 0, 0, 0}, 4), Rational(12));
  // beta = 0: only survivors count
  EXPECT_EQ(capacity_c(5, 3, 4, Rational(0), {1, 2, 3, 0, 0}, 4), Rational(0 + 0 + 1));
  // threshold case: K=2, D=3, r=2, beta=1/2, s=1
  EXPECT_EQ(capacity_c(4, 2, 3, Rational(1, 2), {1, 1, 1, 1}, 2), Rational(4));
}

TEST(Capacity, PermutationInvariant) {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    std::size_t N = 3 + rng.below(5);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below(5);
    Rational beta((long long)rng.below(9), 1 + (long long)rng.below(6));
    long long K = 1 + (long long)rng.below(N - 1), D = K + (long long)rng.below(N - (std::size_t)K);
    long long r = 1 + (long long)rng.below(4);
    auto base = capacity_c((long long)N, K, D, beta, s, r);
    for (int perm = 0; perm < 5; ++perm) {
      std::vector<long long> shuffled = s;
      for (std::size_t i = shuffled.size(); i-- > 1;)
        std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
      ASSERT_EQ(capacity_c((long long)N, K, D, beta, shuffled, r), base);
    }
  }
}

TEST(Feasible, ThresholdCases) {
  std::vector<long long> s{1, 1, 1, 1};
  EXPECT_TRUE(feasible(4, 2, 3, Rational(1, 2), s, 2));
  EXPECT_FALSE(feasible(4, 2, 3, Rational(9, 20), s, 2));
  // capacity at 9/20: 19/10 + 2 = 39/10
  EXPECT_EQ(capacity_c(4, 2, 3, Rational(9, 20), s, 2), Rational(39, 10));
  // s_i >= r for all i: feasible at beta = 0
  EXPECT_TRUE(feasible(4, 2, 3, Rational(0), {2, 3, 2, 2}, 2));
}

TEST(Feasible, MonotoneInBeta) {
  Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    std::size_t N = 3 + rng.below(5);
    long long K = 1 + (long long)rng.below(N - 1), D = K + (long long)rng.below(N - (std::size_t)K);
    long long r = 1 + (long long)rng.below(4);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below(5);
    bool prev = false;
    for (int num = 0; num <= 24; ++num) {
      bool cur = feasible((long long)N, K, D, Rational(num, 6), s, r);
      ASSERT_TRUE(!prev || cur);  // once feasible, stays feasible
      prev = cur;
    }
  }
}

TEST(RStar, WorkedBranches) {
  std::vector<long long> s{1, 1, 1, 1};
  auto at_9_20 = r_star(4, 2, 3, Rational(9, 20), s, 2);
  EXPECT_EQ(at_9_20.branch, "t=1");
  ASSERT_TRUE(at_9_20.value);
  EXPECT_EQ(*at_9_20.value, Rational(21, 10));

  auto at_half = r_star(4, 2, 3, Rational(1, 2), s, 2);
  EXPECT_EQ(at_half.branch, "top");
  ASSERT_TRUE(at_half.value);
  EXPECT_EQ(*at_half.value, Rational(2));

  // r below the smallest survivor count: always feasible
  auto always = r_star(4, 2, 3, Rational(0), {3, 3, 3, 3}, 2);
  EXPECT_EQ(always.branch, "always");
}

TEST(RStar, NonIncreasingInBeta) {
  std::vector<long long> s{0, 1, 2, 0, 3};
  Rational prev(1000000);
  for (int num = 1; num <= 30; ++num) {
    auto rs = r_star(5, 3, 4, Rational(num, 7), s, 3);
    if (!rs.value) continue;
    ASSERT_TRUE(*rs.value <= prev);
    prev = *rs.value;
  }
}

TEST(BetaMin, WorkedInstance) {
  std::vector<long long> s{1, 1, 1, 1};
  auto bm = beta_min(4, 2, 3, 2, s);
  ASSERT_TRUE(bm);
  EXPECT_EQ(*bm, Rational(1, 2));
}

TEST(BetaMin, MutualConsistencyGrid) {
  Rng rng(43);
  for (int t = 0; t < 200; ++t) {
    std::size_t N = 2 + rng.below(7);
    long long K = 1 + (long long)rng.below(N - 1);
    long long D = K + (long long)rng.below(N - (std::size_t)K);
    long long L = 1 + (long long)rng.below(6);
    long long r = 1 + (long long)rng.below((std::uint64_t)L);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below((std::uint64_t)L + 1);
    auto bm = beta_min((long long)N, K, D, r, s);
    ASSERT_TRUE(bm);
    ASSERT_TRUE(feasible((long long)N, K, D, *bm, s, r));
    if (*bm > Rational(0)) {
      Rational eps = *bm / Rational(4096);
      ASSERT_FALSE(feasible((long long)N, K, D, *bm - eps, s, r));
    }
    // agreement with the piecewise formula's feasibility predicate
    auto rs = r_star((long long)N, K, D, *bm, s, r);
    ASSERT_TRUE(rs.value.has_value());
    ASSERT_TRUE(*rs.value <= Rational(r));
  }
}

TEST(Reduction, CapacityRecoversPlainCutset) {
  // s = 0, r = L: threshold beta gives exactly DL/(D-K+1)
  for (long long D = 2; D <= 6; ++D)
    for (long long K = 1; K <= D; ++K) {
      long long L = 3;
      std::vector<long long> s((std::size_t)D + 1, 0);
      auto bm = beta_min(D + 1, K, D, L, s);
      ASSERT_TRUE(bm);
      EXPECT_EQ(Rational(D) * *bm, cutset_mds(D, K, L, 1));
    }
}

TEST(Oracle, CapacityEqualsMinCutSmallGrid) {
  Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    std::size_t N = 2 + rng.below(7);
    std::size_t K = 1 + rng.below(N - 1);
    std::size_t D = K + rng.below(N - K);
    long long L = 1 + (long long)rng.below(6);
    long long r = 1 + (long long)rng.below((std::uint64_t)L);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below((std::uint64_t)L + 1);
    Rational beta((long long)rng.below(25), 1 + (long long)rng.below(12));
    auto c = capacity_c((long long)N, (long long)K, (long long)D, beta, s, r);
    auto g = flow::worst_case_graph(N, K, D, beta, s, r);
    ASSERT_EQ(g.min_cut(), c);
  }
}
