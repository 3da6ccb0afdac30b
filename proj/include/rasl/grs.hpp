#pragma once

#include <vector>

#include "rasl/poly.hpp"
#include "rasl/rng.hpp"

namespace rasl {

// Generalized Reed-Solomon code: { (alpha_j f(y_j))_j : deg f < k }.
// Multipliers default to all-ones, which is the normalization every repair
// scheme here works with; general multipliers exist for the dual view.
struct GrsCode {
  const Field* field = nullptr;
  std::size_t dim = 0;                 // k
  std::vector<Element> locators;      // distinct
  std::vector<Element> multipliers;   // nonzero, same length

  GrsCode() = default;
  GrsCode(const Field& f, std::size_t k, std::vector<Element> y)
      : field(&f), dim(k), locators(std::move(y)) {
    multipliers.assign(locators.size(), f.one());
    validate();
  }
  GrsCode(const Field& f, std::size_t k, std::vector<Element> y, std::vector<Element> alpha)
      : field(&f), dim(k), locators(std::move(y)), multipliers(std::move(alpha)) {
    validate();
  }

  std::size_t length() const { return locators.size(); }

  void validate() const {
    if (dim > length()) throw std::invalid_argument("GrsCode: dimension exceeds length");
    if (multipliers.size() != locators.size())
      throw std::invalid_argument("GrsCode: multiplier count mismatch");
    for (std::size_t i = 0; i < locators.size(); ++i) {
      if (field->is_zero(multipliers[i]))
        throw std::invalid_argument("GrsCode: zero multiplier");
      for (std::size_t j = i + 1; j < locators.size(); ++j)
        if (locators[i] == locators[j])
          throw std::invalid_argument("GrsCode: repeated locator");
    }
  }
};

inline std::vector<Element> grs_encode(const GrsCode& code, const Poly<Field>& message) {
  if (!message.is_zero() && *message.degree() >= code.dim)
    throw std::invalid_argument("grs_encode: message degree too high");
  std::vector<Element> out;
  out.reserve(code.length());
  for (std::size_t j = 0; j < code.length(); ++j)
    out.push_back(code.field->mul(code.multipliers[j], message.eval(code.locators[j])));
  return out;
}

// Multipliers of the dual code: theta_j = prod_{i != j} (y_j - y_i)^{-1}, so
// that GRS_k(1, Y)^dual = GRS_{n-k}(theta, Y).  Verified against the generator
// inner products before returning.
inline std::vector<Element> dual_multipliers(const GrsCode& code) {
  const Field& f = *code.field;
  const std::size_t n = code.length();
  std::vector<Element> theta(n);
  for (std::size_t j = 0; j < n; ++j) {
    Element prod = f.one();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      prod = f.mul(prod, f.sub(code.locators[j], code.locators[i]));
    }
    theta[j] = f.inv(prod);
  }
  // check: sum_j theta_j y_j^s (alpha_j y_j^t) = 0 for all s < n-k, t < k
  for (std::size_t t = 0; t < code.dim; ++t)
    for (std::size_t s = 0; s + code.dim < n; ++s) {
      Element acc = f.zero();
      for (std::size_t j = 0; j < n; ++j) {
        Element y_pow = f.pow(code.locators[j], (std::uint64_t)(s + t));
        acc = f.add(acc, f.mul(f.mul(theta[j], code.multipliers[j]), y_pow));
      }
      if (!f.is_zero(acc)) throw std::logic_error("dual_multipliers: duality check failed");
    }
  return theta;
}

// Erasure decoding: interpolate through dim known positions and consistency
// check the surplus.  Inconsistency means corruption, not erasure.
inline Poly<Field> grs_erasure_decode(const GrsCode& code,
                                      const std::vector<std::pair<std::size_t, Element>>& known) {
  const Field& f = *code.field;
  if (known.size() < code.dim)
    throw std::invalid_argument("grs_erasure_decode: not enough known positions");
  std::vector<std::pair<Element, Element>> pts;
  for (std::size_t i = 0; i < code.dim; ++i) {
    auto [idx, val] = known[i];
    if (idx >= code.length()) throw std::invalid_argument("grs_erasure_decode: bad index");
    pts.push_back({code.locators[idx], f.div(val, code.multipliers[idx])});
  }
  Poly<Field> msg = poly_interpolate(f, pts);
  for (std::size_t i = code.dim; i < known.size(); ++i) {
    auto [idx, val] = known[i];
    Element expect = f.mul(code.multipliers[idx], msg.eval(code.locators[idx]));
    if (!(expect == val))
      throw std::runtime_error("grs_erasure_decode: surplus position inconsistent (corruption)");
  }
  return msg;
}

}  // namespace rasl
