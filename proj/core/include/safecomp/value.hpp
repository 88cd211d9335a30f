#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "safecomp/bytes.hpp"

namespace safecomp {

/// Arbitrary-precision unsigned integer, little-endian 32-bit limbs with no
/// trailing zero limbs (zero = empty limb vector). Covers everything the
/// bundled tasks need: comparison, add, multiply, decrement, decimal and
/// big-endian byte conversions.
class Natural {
 public:
  Natural() = default;
  explicit Natural(std::uint64_t v);

  static Natural from_decimal(std::string_view text);
  static Natural from_bytes_be(std::span<const std::uint8_t> bytes);

  bool is_zero() const { return limbs_.empty(); }
  bool fits_u64() const { return limbs_.size() <= 2; }
  std::uint64_t as_u64() const;  // BadArgument if the value does not fit

  /// Minimal big-endian bytes; canonical form of 0 is the single byte 0x00.
  Bytes to_bytes_be() const;
  std::string to_decimal() const;

  Natural plus(const Natural& other) const;
  Natural times(const Natural& other) const;
  Natural minus_one() const;  // BadArgument on zero

  bool operator==(const Natural& other) const = default;
  std::strong_ordering operator<=>(const Natural& other) const;

 private:
  void trim();
  std::vector<std::uint32_t> limbs_;
};

/// Canonical protocol value: a natural number, a raw byte string, a tuple or
/// a list of values. Task states are expressed as Value trees so one codec
/// covers every payload the protocol hashes, stores or transmits.
class Value {
 public:
  enum class Kind : std::uint8_t { Nat = 1, Bytes = 2, Tuple = 3, List = 4 };

  Value() : rep_(Natural()) {}

  static Value nat(Natural n) { return Value(std::move(n)); }
  static Value nat(std::uint64_t n) { return Value(Natural(n)); }
  static Value bytes(Bytes b) { return Value(std::move(b)); }
  static Value tuple(std::vector<Value> items) { return Value(std::move(items), Kind::Tuple); }
  static Value list(std::vector<Value> items) { return Value(std::move(items), Kind::List); }

  Kind kind() const;
  bool is_nat() const { return kind() == Kind::Nat; }

  const Natural& as_nat() const;
  const Bytes& as_bytes() const;
  const std::vector<Value>& items() const;  // tuple or list

  bool operator==(const Value& other) const = default;

  /// Human-oriented rendering for reports and the CLI.
  std::string to_string() const;

 private:
  explicit Value(Natural n) : rep_(std::move(n)) {}
  explicit Value(Bytes b) : rep_(std::move(b)) {}
  Value(std::vector<Value> items, Kind kind);

  struct Composite {
    Kind kind;
    std::vector<Value> items;
    bool operator==(const Composite&) const = default;
  };

  std::variant<Natural, Bytes, Composite> rep_;
};

/// Canonical serialization of a protocol value. Always produced by encode();
/// injective and deterministic over the whole Value domain.
using EncodedValue = Bytes;

/// Tag-length-value layout: 1 tag byte, 4-byte big-endian payload length,
/// payload. Nat payloads are minimal big-endian bytes (0x00 for zero);
/// composites concatenate the encodings of their items.
EncodedValue encode(const Value& v);
Value decode(const EncodedValue& bytes);  // UnencodableValue on malformed input

// Signed integers ride on naturals via the usual zigzag map.
Natural zigzag(std::int64_t v);
std::int64_t unzigzag(const Natural& n);

}  // namespace safecomp
