#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rasl {

// Minimal unsigned bignum: just enough for field-order exponents (p^N and
// friends).  Little-endian 64-bit limbs, no trailing zero limbs.
class BigUint {
 public:
  BigUint() = default;
  BigUint(std::uint64_t v) { if (v) limbs_.push_back(v); }

  static BigUint pow_small(std::uint64_t base, std::uint64_t exp) {
    BigUint r(1);
    for (std::uint64_t i = 0; i < exp; ++i) r.mul_small(base);
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  bool fits_u64() const { return limbs_.size() <= 1; }
  std::uint64_t as_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigUint: does not fit in u64");
    return limbs_.empty() ? 0 : limbs_[0];
  }

  void mul_small(std::uint64_t m) {
    unsigned __int128 carry = 0;
    for (auto& limb : limbs_) {
      unsigned __int128 cur = (unsigned __int128)limb * m + carry;
      limb = (std::uint64_t)cur;
      carry = cur >> 64;
    }
    if (carry) limbs_.push_back((std::uint64_t)carry);
    trim();
  }

  void add_small(std::uint64_t a) {
    unsigned __int128 carry = a;
    for (std::size_t i = 0; i < limbs_.size() && carry; ++i) {
      unsigned __int128 cur = (unsigned __int128)limbs_[i] + carry;
      limbs_[i] = (std::uint64_t)cur;
      carry = cur >> 64;
    }
    if (carry) limbs_.push_back((std::uint64_t)carry);
  }

  void sub_small(std::uint64_t a) {
    if (is_zero()) {
      if (a) throw std::underflow_error("BigUint: negative result");
      return;
    }
    std::uint64_t borrow = a;
    for (std::size_t i = 0; i < limbs_.size() && borrow; ++i) {
      std::uint64_t before = limbs_[i];
      limbs_[i] -= borrow;
      borrow = before < borrow ? 1 : 0;
    }
    if (borrow) throw std::underflow_error("BigUint: negative result");
    trim();
  }

  // Divides in place by a small divisor, returning the remainder.
  std::uint64_t divmod_small(std::uint64_t d) {
    if (d == 0) throw std::domain_error("BigUint: divide by zero");
    unsigned __int128 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      unsigned __int128 cur = (rem << 64) | limbs_[i];
      limbs_[i] = (std::uint64_t)(cur / d);
      rem = cur % d;
    }
    trim();
    return (std::uint64_t)rem;
  }

  std::uint64_t mod_small(std::uint64_t d) const {
    BigUint copy = *this;
    return copy.divmod_small(d);
  }

  std::size_t bit_length() const {
    if (limbs_.empty()) return 0;
    std::size_t bits = 64 * (limbs_.size() - 1);
    std::uint64_t top = limbs_.back();
    while (top) { ++bits; top >>= 1; }
    return bits;
  }

  bool bit(std::size_t i) const {
    std::size_t limb = i / 64;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 64)) & 1;
  }

  bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }

  std::string str() const {
    if (is_zero()) return "0";
    BigUint copy = *this;
    std::string out;
    while (!copy.is_zero()) out.push_back(char('0' + copy.divmod_small(10)));
    return std::string(out.rbegin(), out.rend());
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint64_t> limbs_;
};

}  // namespace rasl
