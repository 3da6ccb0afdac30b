#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rasl/bigint.hpp"
#include "rasl/linalg.hpp"
#include "rasl/rng.hpp"

#if defined(__PCLMUL__)
#include <wmmintrin.h>
#endif

namespace rasl {

class Field;

// A finite field element.  Representation depends on the characteristic:
//   p == 2 : packed bits, word i holds coefficients of x^(64i) .. x^(64i+63)
//   p  > 2 : one digit per limb, limb i is the coefficient of x^i, in [0, p)
struct Element {
  const Field* field = nullptr;
  std::vector<std::uint64_t> w;

  bool operator==(const Element& o) const { return field == o.field && w == o.w; }
  bool operator!=(const Element& o) const { return !(*this == o); }
  bool operator<(const Element& o) const { return w < o.w; }  // same-field ordering
};

namespace detail {

inline void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
#if defined(__PCLMUL__)
  __m128i va = _mm_set_epi64x(0, (long long)a);
  __m128i vb = _mm_set_epi64x(0, (long long)b);
  __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
  lo = (std::uint64_t)_mm_cvtsi128_si64(r);
  hi = (std::uint64_t)_mm_cvtsi128_si64(_mm_srli_si128(r, 8));
#else
  lo = 0; hi = 0;
  while (b) {
    int s = __builtin_ctzll(b);
    b &= b - 1;
    lo ^= a << s;
    hi ^= s ? (a >> (64 - s)) : 0;
  }
#endif
}

// out (size an+bn) ^= a * b, carryless.
inline void clmul_words(const std::uint64_t* a, std::size_t an, const std::uint64_t* b,
                        std::size_t bn, std::uint64_t* out) {
  for (std::size_t i = 0; i < an; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < bn; ++j) {
      if (!b[j]) continue;
      std::uint64_t lo, hi;
      clmul64(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

inline int top_bit(const std::vector<std::uint64_t>& v) {
  for (std::size_t i = v.size(); i-- > 0;)
    if (v[i]) return (int)(64 * i + 63 - __builtin_clzll(v[i]));
  return -1;
}

inline bool get_bit(const std::vector<std::uint64_t>& v, std::size_t i) {
  return i / 64 < v.size() && ((v[i / 64] >> (i % 64)) & 1);
}

inline void flip_bit(std::vector<std::uint64_t>& v, std::size_t i) { v[i / 64] ^= 1ULL << (i % 64); }

}  // namespace detail

// Immutable finite field GF(p^N) = GF(p)[x]/(f).  Instances come from the
// FieldRegistry and live for the whole process, so Element can hold a raw
// pointer.  All operations are const and safe to call concurrently.
class Field {
 public:
  using Elt = Element;

  Field(std::uint64_t p, std::size_t n, std::vector<std::uint64_t> defining_poly)
      : p_(p), n_(n), poly_(std::move(defining_poly)) {
    if (!is_prime(p_)) throw std::invalid_argument("Field: characteristic must be prime");
    if (n_ < 1) throw std::invalid_argument("Field: degree must be >= 1");
    if (poly_.size() != n_ + 1 || poly_[n_] != 1)
      throw std::invalid_argument("Field: defining polynomial must be monic of degree N");
    for (auto c : poly_)
      if (c >= p_) throw std::invalid_argument("Field: coefficient out of range");
    words_ = p_ == 2 ? (n_ + 63) / 64 : n_;
    if (p_ == 2) {
      mod_words_.assign((n_ + 64) / 64, 0);
      tail_words_.assign(words_, 0);
      for (std::size_t i = 0; i <= n_; ++i)
        if (poly_[i]) detail::flip_bit(mod_words_, i);
      for (std::size_t i = 0; i < n_; ++i)
        if (poly_[i]) detail::flip_bit(tail_words_, i);
      tail_deg_ = detail::top_bit(tail_words_);
    }
    order_ = BigUint::pow_small(p_, n_);
  }

  std::uint64_t characteristic() const { return p_; }
  std::size_t degree() const { return n_; }
  const std::vector<std::uint64_t>& defining_poly() const { return poly_; }
  const BigUint& order() const { return order_; }
  BigUint order_minus_one() const { BigUint q = order_; q.sub_small(1); return q; }

  Element zero() const { return Element{this, std::vector<std::uint64_t>(words_, 0)}; }
  Element one() const { return from_int(1); }

  Element from_int(std::uint64_t v) const {
    Element e = zero();
    if (p_ == 2) {
      if (n_ < 64 && v >> n_) throw std::invalid_argument("from_int: value out of field range");
      e.w[0] = v;
    } else {
      for (std::size_t i = 0; i < n_ && v; ++i) { e.w[i] = v % p_; v /= p_; }
      if (v) throw std::invalid_argument("from_int: value out of field range");
    }
    return e;
  }

  // The residue class of x, i.e. the canonical generator of the extension.
  Element gen() const {
    if (n_ == 1) return one();
    Element e = zero();
    if (p_ == 2) e.w[0] = 2;
    else e.w[1] = 1;
    return e;
  }

  bool is_zero(const Element& a) const {
    for (auto w : a.w) if (w) return false;
    return true;
  }

  Element add(const Element& a, const Element& b) const {
    check(a); check(b);
    Element r = a;
    if (p_ == 2) {
      for (std::size_t i = 0; i < words_; ++i) r.w[i] ^= b.w[i];
    } else {
      for (std::size_t i = 0; i < words_; ++i) {
        r.w[i] += b.w[i];
        if (r.w[i] >= p_) r.w[i] -= p_;
      }
    }
    return r;
  }

  Element neg(const Element& a) const {
    check(a);
    if (p_ == 2) return a;
    Element r = a;
    for (auto& d : r.w) d = d ? p_ - d : 0;
    return r;
  }

  Element sub(const Element& a, const Element& b) const {
    if (p_ == 2) return add(a, b);
    return add(a, neg(b));
  }

  Element mul(const Element& a, const Element& b) const {
    check(a); check(b);
    Element r = zero();
    if (p_ == 2) {
      std::vector<std::uint64_t> prod(2 * words_ + 1, 0);
      detail::clmul_words(a.w.data(), words_, b.w.data(), words_, prod.data());
      reduce_bits(prod);
      std::copy(prod.begin(), prod.begin() + (std::ptrdiff_t)words_, r.w.begin());
    } else {
      std::vector<unsigned __int128> acc(2 * n_ - 1, 0);
      for (std::size_t i = 0; i < n_; ++i) {
        if (!a.w[i]) continue;
        for (std::size_t j = 0; j < n_; ++j) acc[i + j] += (unsigned __int128)a.w[i] * b.w[j];
      }
      reduce_digits(acc);
      for (std::size_t i = 0; i < n_; ++i) r.w[i] = (std::uint64_t)acc[i];
    }
    return r;
  }

  Element pow(const Element& a, std::uint64_t e) const {
    Element base = a, r = one();
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  Element pow(const Element& a, const BigUint& e) const {
    Element r = one();
    std::size_t bits = e.bit_length();
    for (std::size_t i = bits; i-- > 0;) {
      r = mul(r, r);
      if (e.bit(i)) r = mul(r, a);
    }
    return r;
  }

  Element inv(const Element& a) const {
    if (is_zero(a)) throw std::domain_error("Field: division by zero");
    BigUint e = order_;
    e.sub_small(2);
    return pow(a, e);
  }

  Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

  // x -> x^(p^k), by k successive p-th powers.
  Element frobenius(const Element& a, std::size_t k) const {
    Element r = a;
    for (std::size_t i = 0; i < k; ++i) r = p_ == 2 ? mul(r, r) : pow(r, p_);
    return r;
  }

  // Smallest d | N with x^(p^d) = x; equals [GF(p)(x) : GF(p)].
  std::size_t element_degree(const Element& a) const {
    Element c = a;
    for (std::size_t d = 1; d <= n_; ++d) {
      c = frobenius(c, 1);
      if (n_ % d == 0 && c == a) return d;
    }
    throw std::logic_error("element_degree: no fixed degree found");  // unreachable
  }

  // GF(p) coordinate vector of length N (coefficient of x^i at position i).
  std::vector<std::uint64_t> coords(const Element& a) const {
    std::vector<std::uint64_t> c(n_, 0);
    if (p_ == 2) {
      for (std::size_t i = 0; i < n_; ++i) c[i] = detail::get_bit(a.w, i) ? 1 : 0;
    } else {
      c = a.w;
    }
    return c;
  }

  Element from_coords(const std::vector<std::uint64_t>& c) const {
    if (c.size() != n_) throw std::invalid_argument("from_coords: wrong length");
    Element e = zero();
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t d = c[i] % p_;
      if (!d) continue;
      if (p_ == 2) detail::flip_bit(e.w, i);
      else e.w[i] = d;
    }
    return e;
  }

  // Enumeration index, base-p digits; usable as a deterministic ordering and,
  // for small fields, as an exhaustive iteration handle.
  std::uint64_t to_index(const Element& a) const {
    std::uint64_t idx = 0;
    auto c = coords(a);
    for (std::size_t i = n_; i-- > 0;) {
      if (idx > (UINT64_MAX - c[i]) / p_) throw std::overflow_error("to_index: overflow");
      idx = idx * p_ + c[i];
    }
    return idx;
  }

  Element from_index(std::uint64_t idx) const {
    std::vector<std::uint64_t> c(n_, 0);
    for (std::size_t i = 0; i < n_ && idx; ++i) { c[i] = idx % p_; idx /= p_; }
    if (idx) throw std::invalid_argument("from_index: out of range");
    return from_coords(c);
  }

  Element random(Rng& rng) const {
    std::vector<std::uint64_t> c(n_);
    for (auto& d : c) d = rng.below(p_);
    return from_coords(c);
  }

  // Hex for characteristic 2 (LSB = coefficient of x^0), digit list otherwise.
  std::string to_string(const Element& a) const {
    check(a);
    if (p_ == 2) {
      static const char* digits = "0123456789abcdef";
      std::size_t nibbles = (n_ + 3) / 4;
      std::string s(nibbles, '0');
      for (std::size_t i = 0; i < nibbles; ++i) {
        std::uint64_t nib = (a.w[i / 16] >> (4 * (i % 16))) & 0xf;
        s[nibbles - 1 - i] = digits[nib];
      }
      return s;
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < n_; ++i) os << (i ? "," : "") << a.w[i];
    return os.str();
  }

  Element parse(const std::string& s) const {
    Element e = zero();
    if (p_ == 2) {
      std::size_t nibbles = (n_ + 3) / 4;
      if (s.size() != nibbles) throw std::invalid_argument("parse: bad hex length");
      for (std::size_t i = 0; i < nibbles; ++i) {
        char ch = s[nibbles - 1 - i];
        std::uint64_t nib;
        if (ch >= '0' && ch <= '9') nib = (std::uint64_t)(ch - '0');
        else if (ch >= 'a' && ch <= 'f') nib = (std::uint64_t)(ch - 'a' + 10);
        else throw std::invalid_argument("parse: bad hex digit");
        e.w[i / 16] |= nib << (4 * (i % 16));
      }
      int tb = detail::top_bit(e.w);
      if (tb >= (int)n_) throw std::invalid_argument("parse: value exceeds field degree");
    } else {
      std::istringstream is(s);
      std::string tok;
      std::size_t i = 0;
      while (std::getline(is, tok, ',')) {
        if (i >= n_) throw std::invalid_argument("parse: too many digits");
        e.w[i++] = std::stoull(tok) % p_;
      }
      if (i != n_) throw std::invalid_argument("parse: too few digits");
    }
    return e;
  }

  void check(const Element& a) const {
    if (a.field != this) throw std::invalid_argument("Field: element belongs to a different field");
  }

  static bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  // --- raw polynomial helpers over GF(p), used by irreducibility tests ---

  // gcd of dense digit polynomials over GF(p); both lowest-degree-first.
  static std::vector<std::uint64_t> poly_gcd_digits(std::vector<std::uint64_t> a,
                                                    std::vector<std::uint64_t> b,
                                                    std::uint64_t p) {
    auto deg = [](const std::vector<std::uint64_t>& v) -> std::ptrdiff_t {
      for (std::size_t i = v.size(); i-- > 0;)
        if (v[i]) return (std::ptrdiff_t)i;
      return -1;
    };
    while (deg(b) >= 0) {
      // a mod b
      std::ptrdiff_t db = deg(b);
      std::uint64_t lead_inv = PrimeMatrix::inv_mod(b[(std::size_t)db], p);
      for (std::ptrdiff_t da = deg(a); da >= db; da = deg(a)) {
        std::uint64_t f = (std::uint64_t)((unsigned __int128)a[(std::size_t)da] * lead_inv % p);
        for (std::ptrdiff_t i = 0; i <= db; ++i) {
          auto& c = a[(std::size_t)(da - db + i)];
          c = (c + p - (std::uint64_t)((unsigned __int128)f * b[(std::size_t)i] % p)) % p;
        }
      }
      std::swap(a, b);
    }
    return a;
  }

  // Rabin test: f (monic, degree N over GF(p)) is irreducible iff
  // x^(p^N) = x mod f and gcd(x^(p^(N/l)) - x, f) = 1 for all prime l | N.
  static bool is_irreducible(std::uint64_t p, const std::vector<std::uint64_t>& f) {
    std::size_t n = f.size() - 1;
    if (n == 1) return true;
    Field ring(p, n, f);  // quotient ring arithmetic works regardless of irreducibility
    Element x = ring.gen();
    Element fr = ring.frobenius(x, n);
    if (!(fr == x)) return false;
    std::size_t m = n;
    std::vector<std::size_t> primes;
    for (std::size_t l = 2; l * l <= m; ++l)
      if (m % l == 0) {
        primes.push_back(l);
        while (m % l == 0) m /= l;
      }
    if (m > 1) primes.push_back(m);
    for (auto l : primes) {
      Element t = ring.frobenius(x, n / l);
      std::vector<std::uint64_t> diff = ring.coords(ring.sub(t, x));
      diff.resize(n + 1, 0);
      auto g = poly_gcd_digits(diff, f, p);
      std::ptrdiff_t dg = -1;
      for (std::size_t i = g.size(); i-- > 0;)
        if (g[i]) { dg = (std::ptrdiff_t)i; break; }
      if (dg != 0) return false;  // must be a nonzero constant
    }
    return true;
  }

  // Deterministic choice: smallest non-leading coefficient vector, read as a
  // base-p integer, that yields an irreducible monic polynomial.
  static std::vector<std::uint64_t> find_irreducible(std::uint64_t p, std::size_t n) {
    if (n == 1) return {0, 1};
    std::vector<std::uint64_t> f(n + 1, 0);
    f[n] = 1;
    for (std::uint64_t v = 1;; ++v) {
      std::uint64_t t = v;
      for (std::size_t i = 0; i < n; ++i) { f[i] = t % p; t /= p; }
      if (t) throw std::runtime_error("find_irreducible: search space exhausted");
      if (is_irreducible(p, f)) return f;
    }
  }

 private:
  // Reduce a packed-bit polynomial in place modulo the defining polynomial.
  // One descending pass: clearing bit k only touches bits in [k - N, k], all
  // of which are visited later in the same pass.
  void reduce_bits(std::vector<std::uint64_t>& v) const {
    int tb = detail::top_bit(v);
    for (int k = tb; k >= (int)n_; --k) {
      if (!detail::get_bit(v, (std::size_t)k)) {
        if ((k % 64) == 63 && v[(std::size_t)k / 64] == 0) k -= 63;  // skip empty word
        continue;
      }
      std::size_t shift = (std::size_t)k - n_;
      std::size_t sw = shift / 64, sb = shift % 64;
      for (std::size_t i = 0; i < mod_words_.size(); ++i) {
        std::uint64_t w = mod_words_[i];
        if (!w) continue;
        v[i + sw] ^= w << sb;
        if (sb && ((w >> (64 - sb)) != 0)) v[i + sw + 1] ^= w >> (64 - sb);
      }
    }
  }

  void reduce_digits(std::vector<unsigned __int128>& acc) const {
    for (std::size_t k = acc.size(); k-- > n_;) {
      std::uint64_t c = (std::uint64_t)(acc[k] % p_);
      acc[k] = 0;
      if (!c) continue;
      std::size_t base = k - n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!poly_[j]) continue;
        unsigned __int128 sub = (unsigned __int128)c * poly_[j] % p_;
        acc[base + j] += (unsigned __int128)(p_ - (std::uint64_t)sub);
      }
    }
    for (std::size_t i = 0; i < n_; ++i) acc[i] %= p_;
  }

  std::uint64_t p_;
  std::size_t n_;
  std::vector<std::uint64_t> poly_;
  std::size_t words_;
  std::vector<std::uint64_t> mod_words_;   // defining poly bits (p == 2)
  std::vector<std::uint64_t> tail_words_;  // defining poly minus x^N (p == 2)
  int tail_deg_ = -1;
  BigUint order_;
};

}  // namespace rasl
