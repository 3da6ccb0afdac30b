#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rasl/field.hpp"

namespace rasl {

// Univariate polynomial over a field-like type F (Field or ExtField).
// Coefficients are stored lowest degree first with no trailing zeros, so the
// zero polynomial is the empty vector and its degree is nullopt rather than a
// sentinel integer.
template <class F>
class Poly {
 public:
  using Elt = typename F::Elt;

  Poly() = default;  // unbound zero polynomial; assign before use
  explicit Poly(const F& f) : f_(&f) {}
  Poly(const F& f, std::vector<Elt> coeffs) : f_(&f), c_(std::move(coeffs)) { trim(); }

  static Poly constant(const F& f, const Elt& e) { return Poly(f, {e}); }

  // x^k
  static Poly monomial(const F& f, std::size_t k, const Elt& lead) {
    std::vector<Elt> c(k + 1, f.zero());
    c[k] = lead;
    return Poly(f, std::move(c));
  }

  const F& field() const { return *f_; }
  bool is_zero() const { return c_.empty(); }
  std::optional<std::size_t> degree() const {
    if (c_.empty()) return std::nullopt;
    return c_.size() - 1;
  }
  std::size_t size() const { return c_.size(); }

  Elt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : f_->zero(); }
  const std::vector<Elt>& coeffs() const { return c_; }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly operator+(const Poly& o) const {
    std::vector<Elt> r(std::max(c_.size(), o.c_.size()), f_->zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_->add(coeff(i), o.coeff(i));
    return Poly(*f_, std::move(r));
  }

  Poly operator-(const Poly& o) const {
    std::vector<Elt> r(std::max(c_.size(), o.c_.size()), f_->zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_->sub(coeff(i), o.coeff(i));
    return Poly(*f_, std::move(r));
  }

  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(*f_);
    std::vector<Elt> r(c_.size() + o.c_.size() - 1, f_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (f_->is_zero(c_[i])) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
    }
    return Poly(*f_, std::move(r));
  }

  Poly scaled(const Elt& s) const {
    std::vector<Elt> r = c_;
    for (auto& e : r) e = f_->mul(e, s);
    return Poly(*f_, std::move(r));
  }

  Poly shifted(std::size_t k) const {  // multiply by x^k
    if (is_zero()) return *this;
    std::vector<Elt> r(c_.size() + k, f_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
    return Poly(*f_, std::move(r));
  }

  Elt eval(const Elt& x) const {
    Elt acc = f_->zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = f_->add(f_->mul(acc, x), c_[i]);
    return acc;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(f_->inv(c_.back()));
  }

 private:
  void trim() {
    while (!c_.empty() && f_->is_zero(c_.back())) c_.pop_back();
  }

  const F* f_ = nullptr;
  std::vector<Elt> c_;
};

// f = g*q + r with deg r < deg g.  Throws on zero divisor.
template <class F>
std::pair<Poly<F>, Poly<F>> poly_divmod(const Poly<F>& f, const Poly<F>& g) {
  const F& k = f.field();
  if (g.is_zero()) throw std::domain_error("poly_divmod: zero divisor");
  if (f.is_zero() || *f.degree() < *g.degree()) return {Poly<F>(k), f};
  std::size_t dg = *g.degree();
  auto lead_inv = k.inv(g.coeff(dg));
  std::vector<typename F::Elt> rem = f.coeffs();
  std::vector<typename F::Elt> quo(*f.degree() - dg + 1, k.zero());
  for (std::size_t i = rem.size(); i-- > dg;) {
    if (k.is_zero(rem[i])) continue;
    auto q = k.mul(rem[i], lead_inv);
    quo[i - dg] = q;
    for (std::size_t j = 0; j <= dg; ++j)
      rem[i - dg + j] = k.sub(rem[i - dg + j], k.mul(q, g.coeff(j)));
  }
  return {Poly<F>(k, std::move(quo)), Poly<F>(k, std::move(rem))};
}

template <class F>
Poly<F> poly_mod(const Poly<F>& f, const Poly<F>& g) {
  return poly_divmod(f, g).second;
}

template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return a.is_zero() ? a : a.monic();
}

// Lagrange interpolation; x-values must be pairwise distinct.
template <class F>
Poly<F> poly_interpolate(const F& k,
                         const std::vector<std::pair<typename F::Elt, typename F::Elt>>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i].first == pts[j].first)
        throw std::invalid_argument("poly_interpolate: repeated x value");
  Poly<F> acc(k);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (k.is_zero(pts[i].second)) continue;
    Poly<F> basis = Poly<F>::constant(k, k.one());
    auto denom = k.one();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      basis = basis * Poly<F>(k, {k.neg(pts[j].first), k.one()});
      denom = k.mul(denom, k.sub(pts[i].first, pts[j].first));
    }
    acc = acc + basis.scaled(k.mul(pts[i].second, k.inv(denom)));
  }
  return acc;
}

template <class F>
Poly<F> poly_modular_inverse(const Poly<F>& a, const Poly<F>& m);

// Unique F with F = residue_i (mod modulus_i) and deg F < sum deg modulus_i.
// Moduli must be pairwise coprime; the result is re-reduced against every
// congruence before returning.
template <class F>
Poly<F> crt_combine(const F& k, const std::vector<std::pair<Poly<F>, Poly<F>>>& congruences) {
  if (congruences.empty()) throw std::invalid_argument("crt_combine: empty input");
  for (const auto& [mod, res] : congruences) {
    if (mod.is_zero() || *mod.degree() == 0)
      throw std::invalid_argument("crt_combine: modulus must have positive degree");
    if (!res.is_zero() && *res.degree() >= *mod.degree())
      throw std::invalid_argument("crt_combine: residue degree not below modulus degree");
  }
  for (std::size_t i = 0; i < congruences.size(); ++i)
    for (std::size_t j = i + 1; j < congruences.size(); ++j) {
      auto g = poly_gcd(congruences[i].first, congruences[j].first);
      if (g.is_zero() || *g.degree() != 0)
        throw std::invalid_argument("crt_combine: moduli " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are not coprime");
    }

  Poly<F> big = Poly<F>::constant(k, k.one());
  for (const auto& [mod, res] : congruences) big = big * mod;

  Poly<F> acc(k);
  for (const auto& [mod, res] : congruences) {
    if (res.is_zero()) continue;
    auto others = poly_divmod(big, mod).first;           // product of the other moduli
    auto inv = poly_modular_inverse(poly_mod(others, mod), mod);
    acc = acc + others * poly_mod(res * inv, mod);
  }
  acc = poly_mod(acc, big);

  for (const auto& [mod, res] : congruences)
    if (!(poly_mod(acc, mod) == res)) throw std::logic_error("crt_combine: verification failed");
  return acc;
}

// Inverse of a mod m via extended Euclid; gcd(a, m) must be 1.
template <class F>
Poly<F> poly_modular_inverse(const Poly<F>& a, const Poly<F>& m) {
  const F& k = a.field();
  Poly<F> r0 = m, r1 = poly_mod(a, m);
  Poly<F> t0(k), t1 = Poly<F>::constant(k, k.one());
  while (!r1.is_zero()) {
    auto [q, r2] = poly_divmod(r0, r1);
    r0 = r1;
    r1 = r2;
    auto t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0.is_zero() || *r0.degree() != 0)
    throw std::invalid_argument("poly_modular_inverse: arguments not coprime");
  return poly_mod(t0.scaled(k.inv(r0.coeff(0))), m);
}

}  // namespace rasl
