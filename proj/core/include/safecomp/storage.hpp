#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include "safecomp/certificate.hpp"
#include "safecomp/hashing.hpp"

namespace safecomp {

struct BlobRef {
  Digest digest;
  auto operator<=>(const BlobRef&) const = default;
};

/// In-process stand-in for an external immutable content-addressed store.
/// Availability can be toggled to simulate an outage; an optional directory
/// mirrors blobs to digest-named files for inspection.
class BlobStore {
 public:
  BlobStore() = default;
  explicit BlobStore(std::filesystem::path persist_dir);

  /// Idempotent content-addressed put; ref.digest = H(bytes).
  BlobRef put(const Bytes& blob);

  /// Unavailable when never stored or while the store is offline.
  const Bytes& get(const BlobRef& ref) const;

  bool available() const { return available_; }
  void set_available(bool on) { available_ = on; }

  std::size_t size() const { return blobs_.size(); }

 private:
  std::map<std::string, Bytes> blobs_;  // digest hex -> content
  bool available_ = true;
  std::optional<std::filesystem::path> persist_dir_;
};

/// Trusted oracle view over a stored "SCP1" projection blob: returns exactly
/// the requested 1-based entries. Unavailable propagates from the store;
/// MalformedProjection on bad blobs or out-of-range indices.
std::map<std::uint32_t, Projection> oracle_fetch_projection(const BlobStore& store,
                                                            const BlobRef& ref,
                                                            const std::set<std::uint32_t>& indices);

/// Projection length recorded in a stored blob's header (the submit-time
/// probe also verifies the final entry against the published c_n).
std::uint32_t oracle_fetch_projection_length(const BlobStore& store, const BlobRef& ref);

}  // namespace safecomp
