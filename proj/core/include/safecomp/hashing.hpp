#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "safecomp/bytes.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

/// Output of the protocol hash H. Fixed 32 bytes (q = 256).
struct Digest {
  static constexpr std::size_t kSize = 32;
  std::array<std::uint8_t, kSize> bytes{};

  auto operator<=>(const Digest&) const = default;

  std::string hex() const { return to_hex(bytes); }
  static Digest from_hex_string(const std::string& hex);

  Value as_value() const { return Value::bytes(Bytes(bytes.begin(), bytes.end())); }
  static Digest from_value(const Value& v);
};

/// A p-bit projection of a digest, stored in the low bits of a 64-bit word.
struct Projection {
  std::uint64_t bits = 0;
  auto operator<=>(const Projection&) const = default;
};

/// Protocol hash parameters. q is the digest width in bits; p the projection
/// width. q is fixed at 256 by the concrete hash; p is configurable within
/// the word-sized range this implementation supports.
struct HashParams {
  std::uint32_t q = 256;
  std::uint32_t p = 16;

  void validate() const;  // BadArgument unless q == 256 and 8 <= p <= 64
};

inline constexpr HashParams kDefaultHashParams{};

/// H: canonical bytes -> 32-byte digest (SHA-256).
Digest hash_H(const EncodedValue& bytes);

/// The binary operation x ∘ c feeding H when a chain is extended:
/// len(a) || a || len(b) || b with 4-byte big-endian lengths. Injective in
/// the pair, which rules out splice ambiguities between neighbours.
EncodedValue combine(const EncodedValue& value_bytes, const Digest& digest);

/// First p bits of the digest, big-endian.
Projection project(const Digest& c, const HashParams& params = kDefaultHashParams);

std::vector<Projection> project_chain(const std::vector<Digest>& cs,
                                      const HashParams& params = kDefaultHashParams);

}  // namespace safecomp
