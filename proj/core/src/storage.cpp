#include "safecomp/storage.hpp"

#include <fstream>

#include "safecomp/errors.hpp"

namespace safecomp {

BlobStore::BlobStore(std::filesystem::path persist_dir) : persist_dir_(std::move(persist_dir)) {
  std::filesystem::create_directories(*persist_dir_);
}

BlobRef BlobStore::put(const Bytes& blob) {
  const Digest digest = hash_H(blob);
  const std::string key = digest.hex();
  if (!blobs_.contains(key)) {
    blobs_[key] = blob;
    if (persist_dir_) {
      std::ofstream out(*persist_dir_ / (key + ".blob"), std::ios::binary);
      out.write(reinterpret_cast<const char*>(blob.data()),
                static_cast<std::streamsize>(blob.size()));
    }
  }
  return BlobRef{digest};
}

const Bytes& BlobStore::get(const BlobRef& ref) const {
  if (!available_) raise(Errc::Unavailable, "store is offline");
  const auto it = blobs_.find(ref.digest.hex());
  if (it == blobs_.end()) raise(Errc::Unavailable, "no blob " + ref.digest.hex());
  return it->second;
}

std::map<std::uint32_t, Projection> oracle_fetch_projection(
    const BlobStore& store, const BlobRef& ref, const std::set<std::uint32_t>& indices) {
  const Bytes& blob = store.get(ref);
  CertProjection cp;
  try {
    cp = read_projection_file(blob);
  } catch (const Error& e) {
    raise(Errc::MalformedProjection, std::string("blob is not a projection file: ") + e.what());
  }
  std::map<std::uint32_t, Projection> out;
  for (std::uint32_t i : indices) {
    if (i < 1 || i > cp.length())
      raise(Errc::MalformedProjection,
            "index " + std::to_string(i) + " out of bounds for n=" + std::to_string(cp.length()));
    out[i] = cp.items[i - 1];
  }
  return out;
}

std::uint32_t oracle_fetch_projection_length(const BlobStore& store, const BlobRef& ref) {
  const Bytes& blob = store.get(ref);
  try {
    return read_projection_file(blob).length();
  } catch (const Error& e) {
    raise(Errc::MalformedProjection, std::string("blob is not a projection file: ") + e.what());
  }
}

}  // namespace safecomp
