#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rasl/roots.hpp"
#include "rasl/subfield.hpp"

using namespace rasl;

namespace {
const Field& gf13() { return FieldRegistry::instance().get(13, 1); }

Poly<Field> mk(const Field& f, std::initializer_list<std::uint64_t> coeffs) {
  std::vector<Element> c;
  for (auto v : coeffs) c.push_back(f.from_int(v));
  return Poly<Field>(f, c);
}
}  // namespace

TEST(Divmod, WorkedExample) {
  const Field& f = gf13();
  auto fa = mk(f, {11, 5, 0, 10, 1});    // x^4 + 10x^3 + 5x + 11
  auto g = mk(f, {12, 0, 0, 1});         // x^3 - 1
  auto [q, r] = poly_divmod(fa, g);
  EXPECT_EQ(q, mk(f, {10, 1}));          // x + 10
  EXPECT_EQ(r, mk(f, {8, 6}));           // 6x + 8
}

TEST(Divmod, SelfDivision) {
  const Field& f = gf13();
  auto fa = mk(f, {3, 1, 7});
  auto [q, r] = poly_divmod(fa, fa);
  EXPECT_EQ(q, mk(f, {1}));
  EXPECT_TRUE(r.is_zero());
}

TEST(Divmod, LowDegreeForced) {
  const Field& f = gf13();
  auto fa = mk(f, {5, 2});
  auto g = mk(f, {1, 0, 0, 1});
  auto [q, r] = poly_divmod(fa, g);
  EXPECT_TRUE(q.is_zero());
  EXPECT_EQ(r, fa);
}

TEST(Divmod, ZeroDivisorThrows) {
  const Field& f = gf13();
  EXPECT_THROW(poly_divmod(mk(f, {1, 1}), Poly<Field>(f)), std::domain_error);
}

TEST(Divmod, RoundTripRandomized) {
  const Field& f = gf13();
  Rng rng(101);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Element> fc((std::size_t)(1 + rng.below(9))), gc((std::size_t)(1 + rng.below(5)));
    for (auto& e : fc) e = f.random(rng);
    for (auto& e : gc) e = f.random(rng);
    Poly<Field> a(f, fc), b(f, gc);
    if (b.is_zero()) continue;
    auto [q, r] = poly_divmod(a, b);
    ASSERT_EQ(b * q + r, a);
    if (!r.is_zero()) ASSERT_LT(*r.degree(), *b.degree());
  }
}

TEST(ZeroPolynomial, DegreeIsDistinguished) {
  const Field& f = gf13();
  Poly<Field> z(f);
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(z.degree().has_value());
}

TEST(Interpolate, TwoPointExample) {
  const Field& f = gf13();
  auto p = poly_interpolate(f, {{f.from_int(1), f.from_int(1)}, {f.from_int(3), f.from_int(0)}});
  EXPECT_EQ(p, mk(f, {8, 6}));
}

TEST(Interpolate, SinglePointIsConstant) {
  const Field& f = gf13();
  auto p = poly_interpolate(f, {{f.from_int(5), f.from_int(9)}});
  EXPECT_EQ(p, mk(f, {9}));
}

TEST(Interpolate, AllZerosIsZero) {
  const Field& f = gf13();
  auto p = poly_interpolate(f, {{f.from_int(1), f.zero()}, {f.from_int(2), f.zero()}});
  EXPECT_TRUE(p.is_zero());
}

TEST(Interpolate, RepeatedXThrows) {
  const Field& f = gf13();
  EXPECT_THROW(
      poly_interpolate(f, {{f.from_int(1), f.one()}, {f.from_int(1), f.zero()}}),
      std::invalid_argument);
}

TEST(Interpolate, EvaluateRoundTrip) {
  const Field& f = gf13();
  Rng rng(102);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng.below(6);
    std::vector<std::pair<Element, Element>> pts;
    std::set<std::uint64_t> used;
    while (pts.size() < n) {
      auto x = f.random(rng);
      if (!used.insert(f.to_index(x)).second) continue;
      pts.push_back({x, f.random(rng)});
    }
    auto p = poly_interpolate(f, pts);
    for (auto& [x, y] : pts) ASSERT_EQ(p.eval(x), y);
    if (!p.is_zero()) ASSERT_LT(*p.degree(), n);
  }
}

TEST(Crt, WorkedExample) {
  const Field& f = gf13();
  auto m1 = mk(f, {12, 0, 0, 1});  // x^3 - 1
  auto m2 = mk(f, {5, 0, 0, 1});   // x^3 - 8
  auto out = crt_combine(f, {{m1, mk(f, {8, 6})}, {m2, Poly<Field>(f)}});
  EXPECT_EQ(out, mk(f, {11, 5, 0, 10, 1}));
}

TEST(Crt, TwoLinearModuli) {
  const Field& f = FieldRegistry::instance().get(5, 1);
  auto out = crt_combine(
      f, {{Poly<Field>(f, {f.from_int(4), f.one()}), Poly<Field>::constant(f, f.from_int(3))},
          {Poly<Field>(f, {f.from_int(3), f.one()}), Poly<Field>::constant(f, f.from_int(1))}});
  // 3x: at x=1 -> 3, at x=2 -> 6 = 1
  EXPECT_EQ(out, Poly<Field>(f, {f.zero(), f.from_int(3)}));
}

TEST(Crt, SingleCongruenceIsResidue) {
  const Field& f = gf13();
  auto m = mk(f, {12, 0, 0, 1});
  auto r = mk(f, {8, 6});
  EXPECT_EQ(crt_combine(f, {{m, r}}), r);
}

TEST(Crt, NonCoprimeNamesPair) {
  const Field& f = gf13();
  auto m = mk(f, {12, 0, 0, 1});
  try {
    crt_combine(f, {{m, mk(f, {1})}, {m, mk(f, {2})}});
    FAIL() << "non-coprime moduli accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("0 and 1"), std::string::npos);
  }
}

TEST(Crt, ReReductionRandomized) {
  const Field& f = gf13();
  Rng rng(103);
  // moduli x^3 - y for distinct cubes are pairwise coprime
  std::vector<Poly<Field>> mods = {mk(f, {12, 0, 0, 1}), mk(f, {5, 0, 0, 1}),
                                   mk(f, {1, 0, 0, 1})};  // y = 1, 8, 12... careful signs
  for (int t = 0; t < 200; ++t) {
    std::vector<std::pair<Poly<Field>, Poly<Field>>> congruences;
    for (auto& m : mods) {
      std::vector<Element> rc(3);
      for (auto& e : rc) e = f.random(rng);
      congruences.push_back({m, Poly<Field>(f, rc)});
    }
    auto out = crt_combine(f, congruences);
    for (auto& [m, r] : congruences) ASSERT_EQ(poly_mod(out, m), r);
  }
}

TEST(NthRoots, CubesOfGf13) {
  const Field& f = gf13();
  auto idx = [&](const std::vector<Element>& v) {
    std::vector<std::uint64_t> out;
    for (auto& e : v) out.push_back(f.to_index(e));
    return out;
  };
  EXPECT_EQ(idx(nth_roots(f, f.from_int(8), 3)), (std::vector<std::uint64_t>{2, 5, 6}));
  EXPECT_EQ(idx(nth_roots(f, f.from_int(1), 3)), (std::vector<std::uint64_t>{1, 3, 9}));
  EXPECT_TRUE(nth_roots(f, f.from_int(2), 3).empty());
  EXPECT_EQ(idx(nth_roots(f, f.zero(), 3)), (std::vector<std::uint64_t>{0}));
}

TEST(NthRoots, ContainsTheCubedElement) {
  const Field& f = FieldRegistry::instance().get(2, 12);
  Rng rng(104);
  for (int t = 0; t < 50; ++t) {
    auto x = f.random(rng);
    for (std::uint64_t w : {3u, 5u}) {
      auto roots = nth_roots(f, f.pow(x, w), w);
      ASSERT_NE(std::find(roots.begin(), roots.end(), x), roots.end());
    }
  }
}

TEST(NthRoots, SylowHeavyCase) {
  // GF(64): 63 = 3^2 * 7, so cube roots exercise the full discrete-log walk
  const Field& f = FieldRegistry::instance().get(2, 6);
  Rng rng(105);
  for (std::uint64_t i = 0; i < 64; ++i) {
    auto y = f.from_index(i);
    auto roots = nth_roots(f, y, 3);  // internal exhaustive cross-check active
    for (auto& r : roots) ASSERT_EQ(f.pow(r, 3), y);
  }
}

TEST(RootsOfShifted, MonomialExamples) {
  const Field& f = gf13();
  auto h = Poly<Field>::monomial(f, 3, f.one());
  auto idx = [&](const std::vector<Element>& v) {
    std::vector<std::uint64_t> out;
    for (auto& e : v) out.push_back(f.to_index(e));
    return out;
  };
  EXPECT_EQ(idx(roots_of_shifted(f, h, f.from_int(12))), (std::vector<std::uint64_t>{4, 10, 12}));
  EXPECT_TRUE(roots_of_shifted(f, h, f.from_int(2)).empty());
  auto x = Poly<Field>::monomial(f, 1, f.one());
  EXPECT_EQ(idx(roots_of_shifted(f, x, f.from_int(7))), (std::vector<std::uint64_t>{7}));
}

TEST(RootsOfShifted, GeneralPolynomialAgainstExhaustive) {
  const Field& f = gf13();
  Rng rng(106);
  for (int t = 0; t < 100; ++t) {
    std::vector<Element> hc((std::size_t)(2 + rng.below(4)));
    for (auto& e : hc) e = f.random(rng);
    Poly<Field> h(f, hc);
    if (h.is_zero() || *h.degree() == 0) continue;
    auto y = f.random(rng);
    auto got = roots_of_shifted(f, h, y);
    std::vector<Element> expect;
    for (std::uint64_t i = 0; i < 13; ++i) {
      auto x = f.from_int(i);
      if (h.eval(x) == y) expect.push_back(x);
    }
    std::sort(expect.begin(), expect.end(),
              [&](const Element& a, const Element& b) { return f.coords(a) < f.coords(b); });
    ASSERT_EQ(got, expect);
  }
}

TEST(PolyRoots, EmbeddingAnchorDegrees) {
  // find a root of the canonical degree-5 polynomial inside GF(2^10)
  const Field& big = FieldRegistry::instance().get(2, 10);
  const Field& small = FieldRegistry::instance().get(2, 5);
  std::vector<Element> lifted;
  for (auto c : small.defining_poly()) lifted.push_back(big.from_int(c));
  auto root = poly_one_root(big, Poly<Field>(big, lifted), 999);
  EXPECT_EQ(big.element_degree(root), 5u);
}
