#pragma once

// Test-side oracles kept independent of the library code paths they check:
// hashing goes through OpenSSL, byte layouts are rebuilt by hand, and search
// problems fall back to exhaustive scans.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "safecomp/bytes.hpp"
#include "safecomp/dimacs.hpp"
#include "safecomp/rng.hpp"
#include "safecomp/value.hpp"

namespace oracles {

inline std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

// Hand-built canonical layouts (tag, 4-byte big-endian length, payload).
inline void put_u32_be(safecomp::Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline safecomp::Bytes tlv(std::uint8_t tag, const safecomp::Bytes& payload) {
  safecomp::Bytes out;
  out.push_back(tag);
  put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

inline safecomp::Bytes nat_bytes(std::uint64_t v) {
  if (v == 0) return safecomp::Bytes{0x00};
  safecomp::Bytes out;
  for (int shift = 56; shift >= 0; shift -= 8) {
    const std::uint8_t b = static_cast<std::uint8_t>(v >> shift);
    if (!out.empty() || b != 0) out.push_back(b);
  }
  return out;
}

inline safecomp::Bytes encode_nat(std::uint64_t v) { return tlv(1, nat_bytes(v)); }

inline safecomp::Bytes encode_pair_of_nats(std::uint64_t a, std::uint64_t b) {
  safecomp::Bytes payload = encode_nat(a);
  const safecomp::Bytes second = encode_nat(b);
  payload.insert(payload.end(), second.begin(), second.end());
  return tlv(3, payload);
}

/// len(a) || a || len(b) || b with 4-byte big-endian lengths.
inline safecomp::Bytes combine_layout(const safecomp::Bytes& a,
                                      std::span<const std::uint8_t> digest) {
  safecomp::Bytes out;
  put_u32_be(out, static_cast<std::uint32_t>(a.size()));
  out.insert(out.end(), a.begin(), a.end());
  put_u32_be(out, static_cast<std::uint32_t>(digest.size()));
  out.insert(out.end(), digest.begin(), digest.end());
  return out;
}

/// Reference chain for factorial from {n0, 1}, entirely via OpenSSL and the
/// hand-built layouts above. Returns the digest sequence c_1..c_n.
inline std::vector<std::array<std::uint8_t, 32>> factorial_chain(std::uint64_t n0) {
  std::vector<std::array<std::uint8_t, 32>> chain;
  std::uint64_t n = n0, acc = 1;
  std::array<std::uint8_t, 32> prev = sha256(encode_pair_of_nats(n, acc));
  while (n != 0) {
    const safecomp::Bytes packed = combine_layout(encode_pair_of_nats(n, acc), prev);
    prev = sha256(packed);
    chain.push_back(prev);
    acc *= n;
    n -= 1;
  }
  return chain;
}

inline std::optional<std::uint32_t> linear_first_divergence(
    const std::vector<std::uint64_t>& mine, const std::vector<std::uint64_t>& published) {
  const std::size_t n = std::min(mine.size(), published.size());
  for (std::size_t i = 0; i < n; ++i)
    if (mine[i] != published[i]) return static_cast<std::uint32_t>(i + 1);
  return std::nullopt;
}

inline std::uint64_t factorial_u64(std::uint64_t n) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 2; i <= n; ++i) acc *= i;
  return acc;
}

/// Random value tree for codec round-trip properties.
inline safecomp::Value random_value(safecomp::Rng& rng, int depth = 0) {
  using safecomp::Value;
  const std::uint64_t pick = depth >= 3 ? rng.uniform(0, 1) : rng.uniform(0, 3);
  switch (pick) {
    case 0:
      return Value::nat(safecomp::Natural(rng.next_u64() >> rng.uniform(0, 63)));
    case 1:
      return Value::bytes(rng.bytes(rng.uniform(0, 24)));
    default: {
      std::vector<Value> items;
      const std::uint64_t count = rng.uniform(0, 4);
      for (std::uint64_t i = 0; i < count; ++i) items.push_back(random_value(rng, depth + 1));
      return pick == 2 ? Value::tuple(std::move(items)) : Value::list(std::move(items));
    }
  }
}

/// Random k-CNF over num_vars variables (no tautological or duplicate
/// literals inside a clause).
inline safecomp::CnfFormula random_cnf(safecomp::Rng& rng, std::uint32_t num_vars,
                                       std::uint32_t num_clauses, std::uint32_t k = 3) {
  safecomp::CnfFormula f;
  f.num_vars = num_vars;
  for (std::uint32_t c = 0; c < num_clauses; ++c) {
    safecomp::Clause clause;
    std::vector<bool> used(num_vars + 1, false);
    const std::uint32_t width =
        static_cast<std::uint32_t>(rng.uniform(1, std::min(k, num_vars)));
    while (clause.size() < width) {
      const std::uint32_t var = static_cast<std::uint32_t>(rng.uniform(1, num_vars));
      if (used[var]) continue;
      used[var] = true;
      clause.push_back(rng.uniform(0, 1) ? static_cast<int>(var) : -static_cast<int>(var));
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

}  // namespace oracles
