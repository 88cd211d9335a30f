#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "safecomp/hashing.hpp"
#include "safecomp/value.hpp"

namespace safecomp {

/// The digest sequence committing to every computation step. c0 anchors the
/// chain at the task input; entries[i-1] holds c_i = H(x_{i-1} ∘ c_{i-1}).
struct CertChain {
  Digest c0;
  std::vector<Digest> entries;

  std::uint32_t length() const { return static_cast<std::uint32_t>(entries.size()); }

  /// Serialized certificate payload: 32·n bytes, one digest per step.
  std::size_t certificate_bytes() const { return entries.size() * Digest::kSize; }
};

struct Secret {
  Digest s;
  auto operator<=>(const Secret&) const = default;
};

struct Fingerprint {
  Digest hc;
  auto operator<=>(const Fingerprint&) const = default;
};

/// Elementwise p-bit projection of the chain entries, indexed 1..n.
struct CertProjection {
  std::uint32_t p = 16;
  std::vector<Projection> items;

  std::uint32_t length() const { return static_cast<std::uint32_t>(items.size()); }

  /// 1-based access matching the protocol's cp[i] notation.
  Projection at(std::uint32_t i) const;
};

struct ParticipantId {
  std::uint64_t id = 0;
  auto operator<=>(const ParticipantId&) const = default;

  Value as_value() const { return Value::nat(id); }
};

struct VerificationProof {
  ParticipantId id;
  Digest prf;
  auto operator<=>(const VerificationProof&) const = default;
};

/// c_0 = H(encode(d)): the fixed starting point of every chain over input d.
Digest chain_init(const Value& d);

/// c_i = H(encode(x) ∘ c_{i-1}).
Digest chain_extend(const Value& x, const Digest& c_prev);

/// Derives the solver's secret s = H(encode(entries)) and its fingerprint
/// hc = H(encode(s)). EmptyChain when the chain has no entries.
std::pair<Secret, Fingerprint> fingerprint(const CertChain& chain);

/// Same derivation over a bare entry sequence, defined for n = 0 as well
/// (zero-step runs still need a publishable secret and fingerprint).
std::pair<Secret, Fingerprint> fingerprint_of_entries(const std::vector<Digest>& entries);

CertProjection make_projection(const CertChain& chain,
                               const HashParams& params = kDefaultHashParams);

/// Smallest index i >= 1 where the projections differ, or nullopt when they
/// agree over the common prefix and have equal length.
/// LengthMismatchBeyondDivergence when lengths differ but the shorter prefix
/// agrees throughout. Runs a binary search over the common prefix with a
/// linear scan once the window shrinks to 8 positions; interior p-bit
/// collisions can make the result land past the true first divergence, but
/// every returned index is a genuine divergent position whose predecessor
/// matched.
std::optional<std::uint32_t> first_divergence(const CertProjection& mine,
                                              const CertProjection& published);

/// prf = H(encode(id) ∘ s). UndefinedId when id = 0.
VerificationProof make_verification_proof(const Secret& s, ParticipantId id);

bool check_verification_proof(const Secret& s, const VerificationProof& proof);

// File formats. Chains: magic "SCC1", 4-byte big-endian n, c_0, n 32-byte
// entries. Projections: magic "SCP1", 2-byte big-endian p, 4-byte big-endian
// n, n ceil(p/8)-byte big-endian items.
Bytes write_chain_file(const CertChain& chain);
CertChain read_chain_file(const Bytes& data);
Bytes write_projection_file(const CertProjection& cp);
CertProjection read_projection_file(const Bytes& data);

}  // namespace safecomp
