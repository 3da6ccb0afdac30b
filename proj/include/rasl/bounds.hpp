#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rasl/rational.hpp"

namespace rasl::bounds {

// d <= n - k + 1 - (ceil(k/r) - 1)(delta - 1)
inline long long singleton_locality_bound(long long n, long long k, long long r,
                                          long long delta) {
  if (r < 1 || k < 1) throw std::invalid_argument("singleton_locality_bound: need r,k >= 1");
  long long groups = (k + r - 1) / r;
  return n - k + 1 - (groups - 1) * (delta - 1);
}

// B >= D*L / (D - K + e) for an MDS array code with sub-packetization L.
inline Rational cutset_mds(long long D, long long K, long long L, long long e) {
  if (K > D) throw std::invalid_argument("cutset_mds: need K <= D");
  if (e < 1) throw std::invalid_argument("cutset_mds: need at least one erased node");
  return Rational(D * L, D - K + e);
}

// B >= D*r / (D - K + 1) when every column is an (r, L-r+1) repair set.
inline Rational cutset_locality(long long D, long long K, long long r) {
  if (K > D) throw std::invalid_argument("cutset_locality: need K <= D");
  return Rational(D * r, D - K + 1);
}

// Partial-repair bound for a single column: D(e - delta + 1)/(D - K + 1) once
// the erasures exceed the local parities, zero otherwise.
inline Rational partial_cutset(long long D, long long K, long long e, long long delta) {
  if (K >= D) throw std::invalid_argument("partial_cutset: need K < D");
  if (e < delta) return Rational(0);
  return Rational(D * (e - delta + 1), D - K + 1);
}

namespace detail {

// Ascending stable sort of s, ties by original index; returns sorted values.
inline std::vector<long long> sorted_survivors(std::vector<long long> s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  std::vector<long long> out;
  out.reserve(s.size());
  for (auto i : idx) out.push_back(s[i]);
  return out;
}

}  // namespace detail

// Capacity of the worst evolution of the partial information-flow family:
//   c = sum_{i=0}^{K-1} min{ max(0, D-K+1+i) * beta + s_(i), r }
// over the K smallest survivor counts in ascending order.  The adversarial
// failure order pairs small beta coefficients with small survivor counts
// (min is concave, so the assortative pairing minimizes the sum); at uniform
// s this coincides with the anti-assortative pairing.
inline Rational capacity_c(long long N, long long K, long long D, const Rational& beta,
                           const std::vector<long long>& s, long long r) {
  if (K < 1 || K > N) throw std::invalid_argument("capacity_c: need 1 <= K <= N");
  if (D < 1 || D > N - 1) throw std::invalid_argument("capacity_c: need 1 <= D <= N-1");
  if ((long long)s.size() != N) throw std::invalid_argument("capacity_c: s must have N entries");
  if (beta < Rational(0)) throw std::invalid_argument("capacity_c: beta must be nonnegative");
  auto sorted = detail::sorted_survivors(s);
  Rational total(0);
  for (long long i = 0; i < K; ++i) {
    long long coef = D - K + 1 + i;
    if (coef < 0) coef = 0;
    Rational term = beta * Rational(coef) + Rational(sorted[(std::size_t)i]);
    total += std::min(term, Rational(r));
  }
  return total;
}

inline bool feasible(long long N, long long K, long long D, const Rational& beta,
                     const std::vector<long long>& s, long long r) {
  return Rational(K * r) <= capacity_c(N, K, D, beta, s, r);
}

// f(t) = 1 / (K(D+1-K) + t(t+1)/2 + t(K-t-1))
inline Rational threshold_f(long long K, long long D, long long t) {
  Rational denom = Rational(K * (D + 1 - K)) + Rational(t * (t + 1), 2) +
                   Rational(t * (K - t - 1));
  return Rational(1) / denom;
}

// g(t) = sum_{i<t} s_(i) + t(D-K) beta + t(t+1) beta / 2
inline Rational threshold_g(long long K, long long D, const Rational& beta,
                            const std::vector<long long>& sorted, long long t) {
  Rational acc(0);
  for (long long i = 0; i < t; ++i) acc += Rational(sorted[(std::size_t)i]);
  return acc + beta * Rational(t * (D - K)) + beta * Rational(t * (t + 1), 2);
}

struct RStarResult {
  std::optional<Rational> value;  // empty when beta falls below every branch
  std::string branch;             // "always" | "top" | "t=<i>" | "below"
};

// Piecewise closed form for the minimum feasible storage r*, parameterized by
// the feasibility target M (default M = K*r).  The branch conditions compare
// beta against f(t) K (r - s*_(t)), with s*_(0) = s_(0).
inline RStarResult r_star(long long N, long long K, long long D, const Rational& beta,
                          const std::vector<long long>& s, long long r,
                          std::optional<Rational> target = {}) {
  if (D < K) throw std::invalid_argument("r_star: need D >= K");
  if (D > N - 1) throw std::invalid_argument("r_star: need D <= N-1");
  if ((long long)s.size() != N) throw std::invalid_argument("r_star: s must have N entries");
  Rational M = target ? *target : Rational(K * r);
  auto sorted = detail::sorted_survivors(s);

  if (r <= sorted[0]) return {Rational(0), "always"};

  long long tau = 1;
  while (tau < N && sorted[(std::size_t)tau] < r) ++tau;
  // now sorted[tau-1] < r <= sorted[tau] (with sorted[N] = +inf)
  long long tau_star = std::min(tau, K);

  auto s_star = [&](long long t) {
    if (t == 0) return Rational(sorted[0]);
    Rational acc(0);
    for (long long i = 0; i < t; ++i) acc += Rational(sorted[(std::size_t)i]);
    return (acc + Rational((K - t) * sorted[(std::size_t)t])) / Rational(K);
  };

  if (beta >= threshold_f(K, D, 0) * Rational(K) * (Rational(r) - s_star(0)))
    return {M / Rational(K), "top"};

  for (long long t = 1; t <= tau_star - 1; ++t) {
    Rational low = threshold_f(K, D, t) * Rational(K) * (Rational(r) - s_star(t));
    Rational high = threshold_f(K, D, t - 1) * Rational(K) * (Rational(r) - s_star(t - 1));
    if (beta > low && beta <= high) {
      Rational val = (M - threshold_g(K, D, beta, sorted, t)) / Rational(K - t);
      return {val, "t=" + std::to_string(t)};
    }
  }
  return {std::nullopt, "below"};
}

// Smallest beta with K r <= c(beta).  c is piecewise linear with kinks where
// individual terms saturate at r, so a monotone bisection over the sorted
// kink list brackets the threshold segment, and the segment's linear form is
// then solved exactly.
inline std::optional<Rational> beta_min(long long N, long long K, long long D, long long r,
                                        const std::vector<long long>& s) {
  if ((long long)s.size() != N) throw std::invalid_argument("beta_min: s must have N entries");
  auto sorted = detail::sorted_survivors(s);
  const Rational goal(K * r);
  if (goal <= capacity_c(N, K, D, Rational(0), s, r)) return Rational(0);

  // terms: min(r, s_i + a_i beta); a_i = 0 terms can never grow
  std::vector<long long> a(K), sv(K);
  Rational cmax(0);
  for (long long i = 0; i < K; ++i) {
    a[i] = std::max(0LL, D - K + 1 + i);
    sv[i] = sorted[(std::size_t)i];
    cmax += Rational(a[i] > 0 ? r : std::min(sv[i], r));
  }
  if (goal > cmax) return std::nullopt;  // saturating every term still falls short

  std::vector<Rational> kinks;
  for (long long i = 0; i < K; ++i)
    if (a[i] > 0 && sv[i] < r) kinks.push_back(Rational(r - sv[i]) / Rational(a[i]));
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  // bisection for the first feasible kink; the threshold lies in the segment
  // just before it (or before the first kink altogether)
  std::size_t lo = 0, hi = kinks.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible(N, K, D, kinks[mid], s, r)) hi = mid;
    else lo = mid + 1;
  }
  Rational seg_start = (lo == 0) ? Rational(0) : kinks[lo - 1];

  Rational fixed(0), slope(0);
  for (long long i = 0; i < K; ++i) {
    if (a[i] == 0 || sv[i] >= r) {
      fixed += Rational(std::min(sv[i], r));
    } else if (Rational(r - sv[i]) / Rational(a[i]) <= seg_start) {
      fixed += Rational(r);  // saturated before this segment
    } else {
      fixed += Rational(sv[i]);
      slope += Rational(a[i]);
    }
  }
  if (slope == Rational(0)) {
    if (lo == kinks.size() || !feasible(N, K, D, kinks[lo], s, r))
      throw std::logic_error("beta_min: interval resolution failure");
    return kinks[lo];
  }
  Rational beta = (goal - fixed) / slope;
  if (beta < seg_start || !feasible(N, K, D, beta, s, r))
    throw std::logic_error("beta_min: interval resolution failure");
  return beta;
}

}  // namespace rasl::bounds
