#pragma once

#include <cstdint>

#include "safecomp/bytes.hpp"

namespace safecomp {

/// Deterministic pseudo-random stream (splitmix64). Standard-library
/// distributions are not bit-stable across implementations, so scenarios and
/// tests draw exclusively through this wrapper.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi] (modulo bias is irrelevant at test scale).
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return lo + next_u64() % (hi - lo + 1);
  }

  bool chance_one_in(std::uint64_t n) { return next_u64() % n == 0; }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(next_u64());
    return out;
  }

  /// Independent substream, e.g. one per agent.
  Rng fork(std::uint64_t salt) {
    return Rng(next_u64() ^ (salt * 0xd6e8feb86659fd93ull + 0x2545f4914f6cdd1dull));
  }

 private:
  std::uint64_t state_;
};

}  // namespace safecomp
