#pragma once

#include <vector>

#include "rasl/poly.hpp"
#include "rasl/subfield.hpp"

namespace rasl {

class ExtField;

// Element of an extension built on top of a Field: fixed-length coefficient
// vector over the base, lowest power of the generator first.
struct ExtElt {
  const ExtField* ext = nullptr;
  std::vector<Element> c;

  bool operator==(const ExtElt& o) const { return ext == o.ext && c == o.c; }
  bool operator!=(const ExtElt& o) const { return !(*this == o); }
};

// GF(q^s) realized as base[z]/(g) for a monic irreducible g of degree s over
// the base field.  This deliberately avoids re-anchoring the big field over
// GF(p): the base stays the code's field and z is the packing generator.
class ExtField {
 public:
  using Elt = ExtElt;

  ExtField(const Field& base, Poly<Field> modulus) : base_(&base), mod_(std::move(modulus)) {
    if (mod_.is_zero() || !mod_.degree() || *mod_.degree() < 1)
      throw std::invalid_argument("ExtField: modulus must be nonconstant");
    if (!(mod_.coeff(*mod_.degree()) == base.one()))
      throw std::invalid_argument("ExtField: modulus must be monic");
    s_ = *mod_.degree();
    order_ = BigUint::pow_small(base.characteristic(), base.degree() * s_);
  }

  // Deterministic construction: z^s + z + gen^j over the basis powers first
  // (cheap and often enough), then fully random seeded candidates at the
  // usual 1/s irreducible density.
  static ExtField make(const Field& base, std::size_t s) {
    if (s == 0) throw std::invalid_argument("ExtField: degree must be positive");
    if (s >= 2) {
      Element gp = base.one();
      for (std::size_t j = 0; j < base.degree(); ++j) {
        std::vector<Element> c(s + 1, base.zero());
        c[s] = base.one();
        c[1] = base.one();
        c[0] = gp;
        Poly<Field> cand(base, c);
        if (is_irreducible_over(base, cand)) return ExtField(base, cand);
        gp = base.mul(gp, base.gen());
      }
    }
    Rng rng(0xe87aULL ^ (std::uint64_t)s);
    for (std::size_t attempt = 0; attempt < 4096; ++attempt) {
      std::vector<Element> c(s + 1, base.zero());
      c[s] = base.one();
      for (std::size_t i = 0; i < s; ++i) c[i] = base.random(rng);
      Poly<Field> cand(base, c);
      if (is_irreducible_over(base, cand)) return ExtField(base, cand);
    }
    throw std::runtime_error("ExtField: no irreducible modulus found");
  }

  static bool is_irreducible_over(const Field& base, const Poly<Field>& g) {
    std::size_t s = *g.degree();
    if (s == 1) return true;
    Poly<Field> x = Poly<Field>::monomial(base, 1, base.one());
    auto qth_power_steps = [&](Poly<Field> t, std::size_t steps) {
      // t -> t^(q^steps) mod g, one base-field-order exponentiation per step
      BigUint q = base.order();
      for (std::size_t step = 0; step < steps; ++step) {
        Poly<Field> acc = Poly<Field>::constant(base, base.one());
        for (std::size_t i = q.bit_length(); i-- > 0;) {
          acc = poly_mod(acc * acc, g);
          if (q.bit(i)) acc = poly_mod(acc * t, g);
        }
        t = acc;
      }
      return t;
    };
    if (!(qth_power_steps(poly_mod(x, g), s) == poly_mod(x, g))) return false;
    std::size_t m = s;
    std::vector<std::size_t> primes;
    for (std::size_t l = 2; l * l <= m; ++l)
      if (m % l == 0) {
        primes.push_back(l);
        while (m % l == 0) m /= l;
      }
    if (m > 1) primes.push_back(m);
    for (auto l : primes) {
      Poly<Field> t = qth_power_steps(poly_mod(x, g), s / l);
      auto gg = poly_gcd(t - x, g);
      if (gg.is_zero() || *gg.degree() != 0) return false;
    }
    return true;
  }

  const Field& base() const { return *base_; }
  std::size_t degree_over_base() const { return s_; }
  const Poly<Field>& modulus() const { return mod_; }
  const BigUint& order() const { return order_; }
  std::uint64_t characteristic() const { return base_->characteristic(); }

  Elt zero() const { return Elt{this, std::vector<Element>(s_, base_->zero())}; }
  Elt one() const {
    auto e = zero();
    e.c[0] = base_->one();
    return e;
  }

  Elt embed_base(const Element& x) const {
    base_->check(x);
    auto e = zero();
    e.c[0] = x;
    return e;
  }

  Elt generator() const {
    auto e = zero();
    if (s_ == 1) e.c[0] = base_->one();
    else e.c[1] = base_->one();
    return e;
  }

  Elt from_coeffs(std::vector<Element> c) const {
    if (c.size() != s_) throw std::invalid_argument("ExtField: wrong coefficient count");
    return Elt{this, std::move(c)};
  }

  bool is_zero(const Elt& a) const {
    for (const auto& e : a.c)
      if (!base_->is_zero(e)) return false;
    return true;
  }

  Elt add(const Elt& a, const Elt& b) const {
    check(a); check(b);
    Elt r = a;
    for (std::size_t i = 0; i < s_; ++i) r.c[i] = base_->add(r.c[i], b.c[i]);
    return r;
  }

  Elt sub(const Elt& a, const Elt& b) const {
    check(a); check(b);
    Elt r = a;
    for (std::size_t i = 0; i < s_; ++i) r.c[i] = base_->sub(r.c[i], b.c[i]);
    return r;
  }

  Elt neg(const Elt& a) const {
    Elt r = a;
    for (auto& e : r.c) e = base_->neg(e);
    return r;
  }

  Elt mul(const Elt& a, const Elt& b) const {
    check(a); check(b);
    std::vector<Element> prod(2 * s_ - 1, base_->zero());
    for (std::size_t i = 0; i < s_; ++i) {
      if (base_->is_zero(a.c[i])) continue;
      for (std::size_t j = 0; j < s_; ++j)
        prod[i + j] = base_->add(prod[i + j], base_->mul(a.c[i], b.c[j]));
    }
    // reduce by the monic modulus
    for (std::size_t k = prod.size(); k-- > s_;) {
      if (base_->is_zero(prod[k])) continue;
      Element c = prod[k];
      prod[k] = base_->zero();
      for (std::size_t j = 0; j < s_; ++j)
        prod[k - s_ + j] = base_->sub(prod[k - s_ + j], base_->mul(c, mod_.coeff(j)));
    }
    prod.resize(s_, base_->zero());
    return Elt{this, std::move(prod)};
  }

  Elt scale(const Elt& a, const Element& s) const {
    check(a);
    Elt r = a;
    for (auto& e : r.c) e = base_->mul(e, s);
    return r;
  }

  Elt pow(const Elt& a, std::uint64_t e) const {
    Elt base = a, r = one();
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  Elt pow(const Elt& a, const BigUint& e) const {
    Elt r = one();
    for (std::size_t i = e.bit_length(); i-- > 0;) {
      r = mul(r, r);
      if (e.bit(i)) r = mul(r, a);
    }
    return r;
  }

  Elt inv(const Elt& a) const {
    if (is_zero(a)) throw std::domain_error("ExtField: division by zero");
    BigUint e = order_;
    e.sub_small(2);
    return pow(a, e);
  }

  Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }

  Elt frobenius(const Elt& a, std::size_t k) const {  // x -> x^(p^k)
    Elt r = a;
    std::uint64_t p = base_->characteristic();
    for (std::size_t i = 0; i < k; ++i) r = p == 2 ? mul(r, r) : pow(r, p);
    return r;
  }

  // Relative trace down to a subfield of the *base* field: the result always
  // lands in the base (coefficient 0), inside the subfield image.
  Element trace_to(const SubfieldHandle& sub, const Elt& x) const {
    if (&sub.parent() != base_) throw std::invalid_argument("ExtField: subfield of wrong base");
    std::size_t hops = s_ * sub.index();  // [ext : sub]
    Elt acc = x, cur = x;
    for (std::size_t j = 1; j < hops; ++j) {
      cur = frobenius(cur, sub.sub_degree());
      acc = add(acc, cur);
    }
    for (std::size_t i = 1; i < s_; ++i)
      if (!base_->is_zero(acc.c[i]))
        throw std::logic_error("ExtField: trace did not land in the base field");
    return acc.c[0];
  }

  void check(const Elt& a) const {
    if (a.ext != this) throw std::invalid_argument("ExtField: element from another extension");
  }

 private:
  const Field* base_;
  Poly<Field> mod_;
  std::size_t s_ = 0;
  BigUint order_;
};

// Gram-matrix based dual basis over a subfield of the base, for extension
// elements.  Returns nullopt when the candidate set is not a basis.
inline std::optional<std::vector<ExtElt>> ext_gram_dual(const ExtField& ext,
                                                        const SubfieldHandle& sub,
                                                        const std::vector<ExtElt>& basis) {
  const Field& base = ext.base();
  const std::size_t T = basis.size();
  if (T != ext.degree_over_base() * sub.index()) return std::nullopt;
  std::vector<std::vector<Element>> gram(T, std::vector<Element>(T, base.zero()));
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = i; j < T; ++j)
      gram[i][j] = gram[j][i] = ext.trace_to(sub, ext.mul(basis[i], basis[j]));
  auto inv = invert_matrix(base, gram);
  if (!inv) return std::nullopt;
  std::vector<ExtElt> dual(T, ext.zero());
  for (std::size_t j = 0; j < T; ++j)
    for (std::size_t k = 0; k < T; ++k)
      dual[j] = ext.add(dual[j], ext.scale(basis[k], (*inv)[k][j]));
  return dual;
}

// Extension-field version of the multiplier search: gamma_t in the extension
// with {y^u gamma_t : u < w_star, t < T/w_star} a basis over the subfield.
// Nondegeneracy of the trace form makes the Gram test a rank test here.
inline std::pair<std::vector<ExtElt>, std::vector<ExtElt>> find_ext_multipliers(
    const ExtField& ext, const SubfieldHandle& sub, const Element& y, std::size_t w_star,
    std::uint64_t rng_seed, std::size_t budget = 64) {
  const Field& base = ext.base();
  const std::size_t T = ext.degree_over_base() * sub.index();
  if (w_star == 0 || T % w_star != 0)
    throw std::invalid_argument("find_ext_multipliers: w_star must divide [ext:sub]");
  const std::size_t w = T / w_star;

  std::vector<Element> ypow(w_star);
  ypow[0] = base.one();
  for (std::size_t u = 1; u < w_star; ++u) ypow[u] = base.mul(ypow[u - 1], y);
  if (rank_over_subfield(sub, ypow) != w_star)
    throw std::invalid_argument("find_ext_multipliers: powers of y are dependent");

  Rng rng(rng_seed);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    std::vector<ExtElt> gamma(w);
    for (auto& g : gamma) {
      std::vector<Element> c(ext.degree_over_base());
      for (auto& e : c) e = base.random(rng);
      g = ext.from_coeffs(std::move(c));
    }
    std::vector<ExtElt> all;
    all.reserve(T);
    for (std::size_t t = 0; t < w; ++t)
      for (std::size_t u = 0; u < w_star; ++u) all.push_back(ext.scale(gamma[t], ypow[u]));
    if (auto dual = ext_gram_dual(ext, sub, all)) return {std::move(all), std::move(*dual)};
  }
  throw std::runtime_error("find_ext_multipliers: retry budget exhausted");
}

}  // namespace rasl
