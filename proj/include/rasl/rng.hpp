#pragma once

#include <cstdint>

namespace rasl {

// splitmix64: small, fast, and fully deterministic across platforms.  Every
// randomized search in the library threads one of these through explicitly so
// identical seeds give identical artifacts (fields, gamma sets, benchmarks).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) without modulo bias worth caring about at desk scale.
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

  // Derive an independent stream; used when one seed fans out to sub-searches.
  Rng fork(std::uint64_t salt) { return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

 private:
  std::uint64_t state_;
};

}  // namespace rasl
