#include <gtest/gtest.h>

#include <set>

#include "rasl/repair.hpp"

using namespace rasl;

namespace {

// p = 2, degrees (2, 3, 5), w = 3 over GF(2^30): one information class, two
// parity classes, r = 2.  Small enough for tight test loops, rich enough to
// exercise both scheme variants (w* = 1 and w* = 2).
const CodeConfig& small_tower() {
  static CodeConfig cfg = [] {
    auto sk = instantiate_tower(2, {2, 3, 5}, 3, 777);
    return make_tower_config(sk, 1, 2, 2);
  }();
  return cfg;
}

const CodeConfig& gf64_config() {
  static CodeConfig cfg = [] {
    const Field& f = FieldRegistry::instance().get(2, 6);
    std::vector<Element> values;
    for (std::uint64_t i = 1; i < 64 && values.size() < 12; ++i) {
      Element y = f.from_index(i);
      if (nth_roots(f, y, 3).size() == 3) values.push_back(y);
    }
    CodeConfig c;
    c.field = &f;
    c.good = build_monomial_good_poly(f, 3, values);
    c.m1 = 4;
    c.m2 = 8;
    c.r = 2;
    c.common_subfield = &FieldRegistry::instance().subfield(f, 3);
    c.validate();
    return c;
  }();
  return cfg;
}

const CodeConfig& gf13_config() {
  static CodeConfig cfg = [] {
    const Field& f = FieldRegistry::instance().get(13, 1);
    CodeConfig c;
    c.field = &f;
    c.good = build_monomial_good_poly(
        f, 3, {f.from_int(1), f.from_int(8), f.from_int(12), f.from_int(5)});
    c.m1 = 2;
    c.m2 = 2;
    c.r = 2;
    c.validate();
    return c;
  }();
  return cfg;
}

ArrayCodeword random_codeword(const CodeConfig& cfg, Rng& rng) {
  std::vector<Element> a(cfg.k());
  for (auto& e : a) e = cfg.field->random(rng);
  return encode(cfg, a).first;
}

}  // namespace

TEST(Hypotheses, NamedFailures) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  // rack 0: w_i = 2, w* = 1: both variants apply
  EXPECT_FALSE(eng.full_rack_hypotheses(0, RepairEngine::Variant::I));
  EXPECT_FALSE(eng.full_rack_hypotheses(0, RepairEngine::Variant::II));
  // rack 1: w_i = 3, w* = 2: II needs w* | w_i
  auto bad = eng.full_rack_hypotheses(1, RepairEngine::Variant::II);
  ASSERT_TRUE(bad);
  EXPECT_NE(bad->find("w*_i | w_i"), std::string::npos);
}

TEST(Hypotheses, WStarTooLargeNamed) {
  // degrees (2, 5) with w = 11 over GF(2^10): the degree-2 rack has
  // w* = 5 / gcd(2, 5) = 5 > w_i = 2, so variant I must refuse by name
  auto sk = instantiate_tower(2, {2, 5}, 11, 31);
  auto cfg = make_tower_config(sk, 1, 1, 5);
  RepairEngine eng(cfg);
  auto bad = eng.full_rack_hypotheses(0, RepairEngine::Variant::I);
  ASSERT_TRUE(bad);
  EXPECT_NE(bad->find("w*_i <= w_i"), std::string::npos);
}

TEST(Hypotheses, M2TooSmallNamed) {
  auto sk = instantiate_tower(2, {2, 3}, 3, 31);
  auto cfg = make_tower_config(sk, 1, 1, 2);  // m2 = 1 < 2
  RepairEngine eng(cfg);
  auto bad = eng.full_rack_hypotheses(0, RepairEngine::Variant::II);
  ASSERT_TRUE(bad);
  EXPECT_NE(bad->find("m2 >= max{2, w*_i}"), std::string::npos);
}

TEST(FullRack, BothVariantsRecoverExactly) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(21);
  for (int t = 0; t < 25; ++t) {
    auto cw = random_codeword(cfg, rng);
    for (std::size_t rack = 0; rack < cfg.m(); ++rack) {
      for (auto variant : {RepairEngine::Variant::I, RepairEngine::Variant::II}) {
        if (eng.full_rack_hypotheses(rack, variant)) continue;
        auto res = eng.full_rack({cw}, rack, variant, 0x11);
        ASSERT_EQ(res.recovered_columns[0], cw.cols[rack]);
      }
    }
  }
}

TEST(FullRack, BandwidthMatchesClosedFormExactly) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(22);
  auto cw = random_codeword(cfg, rng);
  for (std::size_t rack = 0; rack < cfg.m(); ++rack) {
    std::size_t wi = (*cfg.tower)[rack].w_i;
    std::size_t ws = eng.w_star(rack);
    auto variant = wi % ws == 0 ? RepairEngine::Variant::II : RepairEngine::Variant::I;
    auto res = eng.full_rack({cw}, rack, variant, 0x12);
    // closed form: (w* + m1 - 1) r / w* F_q symbols
    Rational expect((long long)((ws + cfg.m1 - 1) * cfg.r), (long long)ws);
    EXPECT_EQ(res.report.per_stripe_fq, expect);
    EXPECT_EQ(res.report.bound,
              bounds::cutset_locality((long long)(ws + cfg.m1 - 1), (long long)cfg.m1,
                                      (long long)cfg.r));
    EXPECT_TRUE(res.report.optimal);
    // raw subfield count: helpers x w_i r / w* elements of degree N / w_i
    std::size_t per_helper = wi * cfg.r / ws;
    for (const auto& ph : res.report.per_helper) {
      EXPECT_EQ(ph.symbols, per_helper);
      EXPECT_EQ(ph.subfield_degree, cfg.field->degree() / wi);
    }
  }
}

TEST(FullRack, AnyAdmissibleHelperSubsetWorks) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(23);
  auto cw = random_codeword(cfg, rng);
  // rack 1 (w* = 2) needs D = 2 helpers out of {0, 2}
  for (std::size_t t = 0; t < 10; ++t) {
    std::vector<std::size_t> helpers{0, 2};
    if (t % 2) std::swap(helpers[0], helpers[1]);
    auto res =
        eng.full_rack({cw}, 1, RepairEngine::Variant::I, 0x13 + t, helpers);
    ASSERT_EQ(res.recovered_columns[0], cw.cols[1]);
  }
}

TEST(FullRack, MessageLocalityIsStructural) {
  // helper messages are recomputable from the helper's column alone
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(24);
  auto cw = random_codeword(cfg, rng);
  auto res = eng.full_rack({cw}, 1, RepairEngine::Variant::I, 0x14);
  for (const auto& msg : res.transcript.messages) {
    ArrayCodeword isolated = cw;
    for (std::size_t rack = 0; rack < cfg.m(); ++rack)
      if (rack != msg.helper_rack)
        isolated.cols[rack].assign(cfg.L(), cfg.field->zero());
    auto rows = eng.column_coeff_rows(isolated, msg.helper_rack);
    auto truth = eng.column_coeff_rows(cw, msg.helper_rack);
    ASSERT_EQ(rows, truth);
  }
}

TEST(FullRack, MultipleStripesBatch) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(25);
  std::vector<ArrayCodeword> batch;
  for (int s = 0; s < 3; ++s) batch.push_back(random_codeword(cfg, rng));
  auto res = eng.full_rack(batch, 1, RepairEngine::Variant::I, 0x15);
  for (int s = 0; s < 3; ++s) ASSERT_EQ(res.recovered_columns[(std::size_t)s], batch[(std::size_t)s].cols[1]);
  EXPECT_EQ(res.report.per_stripe_fq, Rational(2));
}

TEST(PartialSingle, FullColumnMatchesFullRackBandwidth) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(26);
  auto cw = random_codeword(cfg, rng);
  std::set<std::size_t> all{0, 1, 2};
  auto res_partial = eng.partial_single({cw}, 1, all, RepairEngine::Variant::I, 0x16);
  auto res_full = eng.full_rack({cw}, 1, RepairEngine::Variant::I, 0x16);
  EXPECT_EQ(res_partial.report.per_stripe_fq, res_full.report.per_stripe_fq);
  EXPECT_EQ(res_partial.recovered_columns[0], cw.cols[1]);
}

TEST(PartialSingle, BatchedExactBandwidth) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(27);
  std::vector<ArrayCodeword> batch{random_codeword(cfg, rng), random_codeword(cfg, rng)};
  auto res = eng.partial_single(batch, 1, {0, 2}, RepairEngine::Variant::I, 0x17);
  for (int s = 0; s < 2; ++s) ASSERT_EQ(res.recovered_columns[(std::size_t)s], batch[(std::size_t)s].cols[1]);
  // (w* + m1 - 1)(|E| - delta + 1)/w* = 2 * 1 / 2 = 1
  EXPECT_EQ(res.report.per_stripe_fq, Rational(1));
  EXPECT_EQ(res.report.bound, Rational(1));
  EXPECT_TRUE(res.report.optimal);
}

TEST(PartialSingle, BelowDeltaRejected) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(28);
  auto cw = random_codeword(cfg, rng);
  try {
    eng.partial_single({cw}, 1, {0}, RepairEngine::Variant::I, 0x18);
    FAIL() << "below-locality erasure accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("local repair"), std::string::npos);
  }
}

TEST(MultiPartial, SingleRackAtClosedFormCount) {
  const auto& cfg = gf64_config();
  RepairEngine eng(cfg);
  Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    auto cw = random_codeword(cfg, rng);
    ErasurePattern pat;
    pat.racks.push_back({(std::size_t)(t % cfg.m()), {0, 1}});
    auto res = eng.multi_partial({cw}, pat);
    for (const auto& w : res.transcript.recovered)
      ASSERT_EQ(w.value, cw.cols[w.rack][w.position]);
    EXPECT_EQ(res.report.per_helper_per_stripe_symbols, Rational(1));
    EXPECT_EQ(res.transcript.helpers.size(), cfg.m() - 1);
  }
}

TEST(MultiPartial, TwoRacksMixedSizes) {
  const auto& cfg = gf64_config();
  // tau = 2 needs m2 >= 2 * 64/8 = 16 > 8, so the GF(64) instance must refuse
  RepairEngine eng(cfg);
  Rng rng(30);
  auto cw = random_codeword(cfg, rng);
  ErasurePattern pat;
  pat.racks.push_back({0, {0, 1}});
  pat.racks.push_back({1, {0, 1}});
  try {
    eng.multi_partial({cw}, pat);
    FAIL() << "m2 hypothesis should fail for tau = 2";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("need 16"), std::string::npos);
  }
}

TEST(MultiPartial, BoundaryAllDeltaSized) {
  const auto& cfg = gf64_config();
  RepairEngine eng(cfg);
  Rng rng(31);
  auto cw = random_codeword(cfg, rng);
  ErasurePattern pat;
  pat.racks.push_back({3, {1, 2}});
  auto res = eng.multi_partial({cw}, pat);
  // M = tau at the boundary |E| = delta
  EXPECT_EQ(res.report.per_helper_bound_symbols, Rational(1));
  EXPECT_TRUE(res.report.optimal);
}

TEST(MultiPartial, MissingCommonSubfieldRejected) {
  const auto& cfg = small_tower();  // no common subfield configured
  RepairEngine eng(cfg);
  Rng rng(32);
  auto cw = random_codeword(cfg, rng);
  ErasurePattern pat;
  pat.racks.push_back({0, {0, 1}});
  EXPECT_THROW(eng.multi_partial({cw}, pat), std::invalid_argument);
}

TEST(MultiPartial, FullColumnInsidePattern) {
  const auto& cfg = gf64_config();
  RepairEngine eng(cfg);
  Rng rng(33);
  auto cw = random_codeword(cfg, rng);
  ErasurePattern pat;
  pat.racks.push_back({2, {0, 1, 2}});  // whole column, tau = 1
  auto res = eng.multi_partial({cw}, pat);
  ASSERT_EQ(res.recovered_columns[0], cw.cols[2]);
  EXPECT_EQ(res.report.per_helper_per_stripe_symbols, Rational(2));  // M = 3 - 1*2 + ... = 2
}

TEST(Plugin, NaiveReductionRoundTrip) {
  const auto& cfg = gf13_config();
  RepairEngine eng(cfg);
  NaiveGrsPlugin naive;
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    auto cw = random_codeword(cfg, rng);
    ErasurePattern pat;
    pat.racks.push_back({(std::size_t)(t % cfg.m()), {0, 1}});
    auto res = eng.via_plugin({cw}, pat, naive);
    for (const auto& w : res.transcript.recovered)
      ASSERT_EQ(w.value, cw.cols[w.rack][w.position]);
    // naive: m1 helpers, (wbar - delta + 1) = 1 symbol each
    EXPECT_EQ(res.transcript.helpers.size(), cfg.m1);
    EXPECT_EQ(res.report.per_stripe_fq, Rational((long long)cfg.m1));
    EXPECT_TRUE(res.report.optimal);
  }
}

TEST(Plugin, TwoRackUniformPattern) {
  const auto& cfg = gf13_config();
  RepairEngine eng(cfg);
  NaiveGrsPlugin naive;
  Rng rng(35);
  auto cw = random_codeword(cfg, rng);
  ErasurePattern pat;
  pat.racks.push_back({0, {0, 1, 2}});
  pat.racks.push_back({3, {0, 1, 2}});
  auto res = eng.via_plugin({cw}, pat, naive);
  for (const auto& w : res.transcript.recovered)
    ASSERT_EQ(w.value, cw.cols[w.rack][w.position]);
}

TEST(Plugin, NonUniformRejected) {
  const auto& cfg = gf13_config();
  RepairEngine eng(cfg);
  NaiveGrsPlugin naive;
  Rng rng(36);
  auto cw = random_codeword(cfg, rng);
  ErasurePattern pat;
  pat.racks.push_back({0, {0, 1}});
  pat.racks.push_back({1, {0, 1, 2}});
  EXPECT_THROW(eng.via_plugin({cw}, pat, naive), std::invalid_argument);
}

TEST(Transcript, SymbolsLiveInDeclaredSubfield) {
  const auto& cfg = small_tower();
  RepairEngine eng(cfg);
  Rng rng(37);
  auto cw = random_codeword(cfg, rng);
  auto res = eng.full_rack({cw}, 1, RepairEngine::Variant::I, 0x19);
  for (const auto& msg : res.transcript.messages) {
    const Field& sub =
        FieldRegistry::instance().get(cfg.field->characteristic(), msg.subfield_degree);
    for (const auto& s : msg.symbols) ASSERT_EQ(s.field, &sub);
  }
}
