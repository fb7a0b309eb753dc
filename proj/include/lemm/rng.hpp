#pragma once

#include <cstdint>

#include "lemm/rational.hpp"

namespace lemm {

/// splitmix64: tiny, seedable, identical across platforms. Used wherever
/// reproducible sampling is needed (condition witness search, generators).
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [0, bound); bound must be positive.
  uint64_t below(uint64_t bound) { return next() % bound; }

  /// Integer in [lo, hi] inclusive.
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

 private:
  uint64_t state_;
};

/// `count` nonnegative dyadic rationals k_i / 2^bits summing to exactly 1.
Vec dyadic_weights(SplitMix64& rng, int count, int bits = 16);

}  // namespace lemm
