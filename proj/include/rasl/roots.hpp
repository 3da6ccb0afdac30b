#pragma once

#include <algorithm>
#include <vector>

#include "rasl/field.hpp"
#include "rasl/poly.hpp"
#include "rasl/rng.hpp"

namespace rasl {
namespace detail {

inline std::vector<std::pair<std::uint64_t, std::size_t>> factor_small(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::size_t>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    std::size_t e = 0;
    while (n % d == 0) { n /= d; ++e; }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// t = s^{-1} mod M for small s and big M, via t = (1 + k*M)/s with the unique
// k in [0, s) making the numerator divisible.  Requires gcd(s, M) = 1.
inline BigUint small_inverse_mod_big(std::uint64_t s, const BigUint& M) {
  if (s == 1) return BigUint(1);
  std::uint64_t mr = M.mod_small(s);
  std::uint64_t k = (s - PrimeMatrix::inv_mod(mr, s)) % s;
  BigUint t = M;
  t.mul_small(k);
  t.add_small(1);
  if (t.divmod_small(s) != 0) throw std::logic_error("small_inverse_mod_big: not coprime");
  return t;
}

// Element of multiplicative order exactly d (d | q-1), found by a
// deterministic ascending scan.
inline Element element_of_order(const Field& f, std::uint64_t d) {
  if (d == 1) return f.one();
  BigUint e = f.order_minus_one();
  if (e.mod_small(d) != 0) throw std::invalid_argument("element_of_order: d does not divide q-1");
  e.divmod_small(d);
  auto factors = factor_small(d);
  for (std::uint64_t k = 2; k < (1u << 21); ++k) {
    Element u = f.from_index(k);
    if (f.is_zero(u)) continue;
    Element z = f.pow(u, e);
    bool exact = true;
    for (auto [l, mult] : factors) {
      (void)mult;
      if (f.pow(z, d / l) == f.one()) { exact = false; break; }
    }
    if (exact) return z;
  }
  throw std::runtime_error("element_of_order: search exhausted");
}

// One solution of z^(l^k) = y for prime l with l^k | q-1, y a (l^k)-th power.
// Adleman-Manders-Miller: shift into the prime-to-l part with an exponent
// inverse, then fix up the l-Sylow component by a Pohlig-Hellman walk.
inline Element prime_power_root(const Field& f, const Element& y, std::uint64_t l,
                                std::size_t k) {
  if (k == 0) return y;
  BigUint q1 = f.order_minus_one();
  std::size_t a = 0;
  BigUint m = q1;
  while (m.mod_small(l) == 0) { m.divmod_small(l); ++a; }
  if (k > a) throw std::invalid_argument("prime_power_root: l^k does not divide q-1");
  std::uint64_t lk = 1, la = 1;
  for (std::size_t i = 0; i < k; ++i) lk *= l;
  for (std::size_t i = 0; i < a; ++i) {
    if (la > UINT64_MAX / l) throw std::overflow_error("prime_power_root: Sylow too large");
    la *= l;
  }

  BigUint alpha = small_inverse_mod_big(lk, m);
  Element x0 = f.pow(y, alpha);
  Element eta = f.mul(f.pow(x0, lk), f.inv(y));  // lies in the order-l^a Sylow subgroup

  // Sylow generator by deterministic scan.
  Element c = f.zero();
  for (std::uint64_t u = 2; u < (1u << 21); ++u) {
    Element cand = f.pow(f.from_index(u), m);
    if (!(f.pow(cand, la / l) == f.one())) { c = cand; break; }
  }
  if (f.is_zero(c)) throw std::runtime_error("prime_power_root: no Sylow generator found");

  Element gamma = f.pow(c, la / l);
  std::vector<Element> gamma_pows(l);
  gamma_pows[0] = f.one();
  for (std::uint64_t j = 1; j < l; ++j) gamma_pows[j] = f.mul(gamma_pows[j - 1], gamma);

  // d with c^d = eta, digit by digit base l.
  std::uint64_t d = 0, lpow = 1;
  for (std::size_t i = 0; i < a; ++i) {
    Element probe = f.mul(eta, f.inv(f.pow(c, d)));
    probe = f.pow(probe, la / (lpow * l));
    std::uint64_t digit = l;
    for (std::uint64_t j = 0; j < l; ++j)
      if (probe == gamma_pows[j]) { digit = j; break; }
    if (digit == l) throw std::logic_error("prime_power_root: discrete log failed");
    d += digit * lpow;
    lpow *= l;
  }
  if (d % lk != 0) throw std::logic_error("prime_power_root: target is not an l^k-th power");
  Element sigma = f.pow(c, (la - d) / lk);  // sigma^(l^k) = eta^{-1}
  return f.mul(x0, sigma);
}

}  // namespace detail

// All solutions of x^w = y.  With d = gcd(w, q-1): solvable iff
// y^((q-1)/d) = 1, in which case there are exactly d solutions, one found via
// a d-th root plus an exponent inverse and the rest by the order-d subgroup.
// Small fields re-verify the whole answer exhaustively.
inline std::vector<Element> nth_roots(const Field& f, const Element& y, std::uint64_t w) {
  if (w == 0) throw std::invalid_argument("nth_roots: w must be positive");
  std::vector<Element> out;
  if (f.is_zero(y)) {
    out.push_back(f.zero());
    return out;
  }
  BigUint q1 = f.order_minus_one();

  std::uint64_t d = 1;
  std::vector<std::pair<std::uint64_t, std::size_t>> d_factors;
  for (auto [l, e] : detail::factor_small(w)) {
    std::size_t av = 0;
    BigUint m = q1;
    while (av < e && m.mod_small(l) == 0) { m.divmod_small(l); ++av; }
    for (std::size_t i = 0; i < av; ++i) d *= l;
    if (av) d_factors.push_back({l, av});
  }

  BigUint check = q1;
  check.divmod_small(d);
  if (!(f.pow(y, check) == f.one())) {
    // not a w-th power; fall through to the exhaustive cross-check with empty out
  } else {
    Element root = y;
    for (auto [l, k] : d_factors) root = detail::prime_power_root(f, root, l, k);
    // root^d = y; now invert the remaining exponent w/d modulo (q-1)/d.
    std::uint64_t s = w / d;
    BigUint M = q1;
    M.divmod_small(d);
    Element x0 = f.pow(root, detail::small_inverse_mod_big(s, M));
    Element zeta = detail::element_of_order(f, d);
    Element cur = f.one();
    for (std::uint64_t i = 0; i < d; ++i) {
      out.push_back(f.mul(x0, cur));
      cur = f.mul(cur, zeta);
    }
    std::sort(out.begin(), out.end(),
              [&](const Element& a, const Element& b) { return f.coords(a) < f.coords(b); });
  }

  if (f.order().fits_u64() && f.order().as_u64() <= (1u << 16)) {
    std::vector<Element> brute;
    for (std::uint64_t i = 0; i < f.order().as_u64(); ++i) {
      Element x = f.from_index(i);
      if (f.pow(x, w) == y) brute.push_back(x);
    }
    std::sort(brute.begin(), brute.end(),
              [&](const Element& a, const Element& b) { return f.coords(a) < f.coords(b); });
    if (!(brute == out)) throw std::logic_error("nth_roots: exhaustive cross-check failed");
  }
  return out;
}

// All roots in the field of an arbitrary polynomial, multiplicity collapsed.
// gcd with x^(p^N) - x isolates the rational roots, then trace/power splitting
// takes the factor apart.
inline std::vector<Element> poly_roots(const Field& f, const Poly<Field>& g_in,
                                       std::uint64_t seed = 0x9d5f) {
  std::vector<Element> out;
  if (g_in.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
  Poly<Field> g = g_in.monic();
  if (*g.degree() == 0) return out;

  auto frob_steps_mod = [&](Poly<Field> t, std::size_t steps, const Poly<Field>& mod) {
    for (std::size_t i = 0; i < steps; ++i) {
      Poly<Field> acc = Poly<Field>::constant(f, f.one());
      Poly<Field> b = t;
      std::uint64_t e = f.characteristic();
      while (e) {
        if (e & 1) acc = poly_mod(acc * b, mod);
        e >>= 1;
        if (e) b = poly_mod(b * b, mod);
      }
      t = acc;
    }
    return t;
  };

  Poly<Field> x = Poly<Field>::monomial(f, 1, f.one());
  Poly<Field> split = poly_gcd(frob_steps_mod(poly_mod(x, g), f.degree(), g) - x, g);
  if (split.is_zero() || *split.degree() == 0) return out;

  Rng rng(seed);
  std::vector<Poly<Field>> stack{split};
  while (!stack.empty()) {
    Poly<Field> cur = stack.back();
    stack.pop_back();
    if (*cur.degree() == 1) {
      out.push_back(f.neg(f.mul(cur.coeff(0), f.inv(cur.coeff(1)))));
      continue;
    }
    Poly<Field> piece(f);
    if (f.characteristic() == 2) {
      Element u = f.random(rng);
      if (f.is_zero(u)) u = f.one();
      Poly<Field> t = poly_mod(Poly<Field>(f, {f.zero(), u}), cur);
      Poly<Field> tr(f);
      for (std::size_t i = 0; i < f.degree(); ++i) {
        tr = tr + t;
        t = poly_mod(t * t, cur);
      }
      piece = poly_gcd(tr, cur);
    } else {
      Element delta = f.random(rng);
      Poly<Field> shifted = Poly<Field>(f, {delta, f.one()});
      BigUint e = f.order_minus_one();
      e.divmod_small(2);
      Poly<Field> acc = Poly<Field>::constant(f, f.one());
      Poly<Field> b = poly_mod(shifted, cur);
      for (std::size_t i = e.bit_length(); i-- > 0;) {
        acc = poly_mod(acc * acc, cur);
        if (e.bit(i)) acc = poly_mod(acc * b, cur);
      }
      piece = poly_gcd(acc - Poly<Field>::constant(f, f.one()), cur);
    }
    if (piece.is_zero() || *piece.degree() == 0 || *piece.degree() == *cur.degree()) {
      stack.push_back(cur);  // unlucky split, retry
      continue;
    }
    stack.push_back(piece);
    stack.push_back(poly_divmod(cur, piece).first);
  }
  std::sort(out.begin(), out.end(),
            [&](const Element& a, const Element& b) { return f.coords(a) < f.coords(b); });
  return out;
}

// Like poly_roots but returns only one root; used for embedding anchors where
// splitting the full tree would be wasted work.
inline Element poly_one_root(const Field& f, const Poly<Field>& g_in, std::uint64_t seed) {
  Poly<Field> g = g_in.monic();
  if (g.is_zero() || *g.degree() == 0) throw std::invalid_argument("poly_one_root: no root");
  Rng rng(seed);
  while (*g.degree() > 1) {
    Poly<Field> piece(f);
    if (f.characteristic() == 2) {
      Element u = f.random(rng);
      if (f.is_zero(u)) u = f.one();
      Poly<Field> t = poly_mod(Poly<Field>(f, {f.zero(), u}), g);
      Poly<Field> tr(f);
      for (std::size_t i = 0; i < f.degree(); ++i) {
        tr = tr + t;
        t = poly_mod(t * t, g);
      }
      piece = poly_gcd(tr, g);
    } else {
      Element delta = f.random(rng);
      Poly<Field> shifted = Poly<Field>(f, {delta, f.one()});
      BigUint e = f.order_minus_one();
      e.divmod_small(2);
      Poly<Field> acc = Poly<Field>::constant(f, f.one());
      Poly<Field> b = poly_mod(shifted, g);
      for (std::size_t i = e.bit_length(); i-- > 0;) {
        acc = poly_mod(acc * acc, g);
        if (e.bit(i)) acc = poly_mod(acc * b, g);
      }
      piece = poly_gcd(acc - Poly<Field>::constant(f, f.one()), g);
    }
    if (piece.is_zero() || *piece.degree() == 0 || *piece.degree() == *g.degree()) continue;
    Poly<Field> other = poly_divmod(g, piece).first;
    g = (*piece.degree() <= *other.degree()) ? piece : other;
  }
  return f.neg(f.mul(g.coeff(0), f.inv(g.coeff(1))));
}

// Roots of h(x) - y.  Monic monomials route through nth_roots; everything else
// goes through the generic splitter.
inline std::vector<Element> roots_of_shifted(const Field& f, const Poly<Field>& h,
                                             const Element& y) {
  if (h.is_zero() || *h.degree() == 0)
    throw std::invalid_argument("roots_of_shifted: h must be nonconstant");
  std::size_t w = *h.degree();
  bool monomial = h.coeff(w) == f.one();
  for (std::size_t i = 1; i < w && monomial; ++i)
    if (!f.is_zero(h.coeff(i))) monomial = false;
  if (monomial) return nth_roots(f, f.sub(y, h.coeff(0)), w);
  return poly_roots(f, h - Poly<Field>::constant(f, y));
}

}  // namespace rasl
