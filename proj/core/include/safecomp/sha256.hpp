#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "safecomp/bytes.hpp"

namespace safecomp {

/// Incremental SHA-256 (FIPS 180-4). Self-contained so the byte-exact
/// commitments do not depend on any system crypto library; the test suite
/// cross-checks digests against an independent implementation.
class Sha256 {
 public:
  static constexpr std::size_t kDigestSize = 32;

  Sha256() { reset(); }

  void reset();
  void update(std::span<const std::uint8_t> data);
  std::array<std::uint8_t, kDigestSize> finish();

  static std::array<std::uint8_t, kDigestSize> digest(std::span<const std::uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finish();
  }

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_{};
  std::uint64_t total_bytes_ = 0;
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffered_ = 0;
};

}  // namespace safecomp
