#include "safecomp/hashing.hpp"

#include "safecomp/errors.hpp"
#include "safecomp/sha256.hpp"

namespace safecomp {

Digest Digest::from_hex_string(const std::string& hex) {
  const Bytes raw = from_hex(hex);
  if (raw.size() != kSize) raise(Errc::BadArgument, "digest hex must be 32 bytes");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

Digest Digest::from_value(const Value& v) {
  const Bytes& raw = v.as_bytes();
  if (raw.size() != kSize) raise(Errc::BadArgument, "digest value must be 32 bytes");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

void HashParams::validate() const {
  if (q != 256) raise(Errc::BadArgument, "q must be 256 for the SHA-256 instantiation");
  if (p < 8 || p > 64) raise(Errc::BadArgument, "p must lie in [8, 64]");
}

Digest hash_H(const EncodedValue& bytes) {
  Digest d;
  d.bytes = Sha256::digest(bytes);
  return d;
}

EncodedValue combine(const EncodedValue& value_bytes, const Digest& digest) {
  EncodedValue out;
  out.reserve(8 + value_bytes.size() + Digest::kSize);
  append_u32_be(out, static_cast<std::uint32_t>(value_bytes.size()));
  append_bytes(out, value_bytes);
  append_u32_be(out, static_cast<std::uint32_t>(Digest::kSize));
  append_bytes(out, digest.bytes);
  return out;
}

Projection project(const Digest& c, const HashParams& params) {
  params.validate();
  const std::uint32_t nbytes = (params.p + 7) / 8;
  std::uint64_t acc = 0;
  for (std::uint32_t i = 0; i < nbytes; ++i) acc = (acc << 8) | c.bytes[i];
  acc >>= (8 * nbytes - params.p);
  return Projection{acc};
}

std::vector<Projection> project_chain(const std::vector<Digest>& cs, const HashParams& params) {
  std::vector<Projection> out;
  out.reserve(cs.size());
  for (const Digest& c : cs) out.push_back(project(c, params));
  return out;
}

}  // namespace safecomp
