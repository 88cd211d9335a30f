#include "safecomp/certificate.hpp"

#include <algorithm>

#include "safecomp/errors.hpp"

namespace safecomp {

Projection CertProjection::at(std::uint32_t i) const {
  if (i < 1 || i > items.size()) raise(Errc::IndexOutOfRange, "cp index " + std::to_string(i));
  return items[i - 1];
}

Digest chain_init(const Value& d) {
  return hash_H(encode(d));
}

Digest chain_extend(const Value& x, const Digest& c_prev) {
  return hash_H(combine(encode(x), c_prev));
}

namespace {

Value entries_value(const std::vector<Digest>& entries) {
  std::vector<Value> items;
  items.reserve(entries.size());
  for (const Digest& c : entries) items.push_back(c.as_value());
  return Value::list(std::move(items));
}

}  // namespace

std::pair<Secret, Fingerprint> fingerprint_of_entries(const std::vector<Digest>& entries) {
  const Secret s{hash_H(encode(entries_value(entries)))};
  const Fingerprint hc{hash_H(encode(s.s.as_value()))};
  return {s, hc};
}

std::pair<Secret, Fingerprint> fingerprint(const CertChain& chain) {
  if (chain.entries.empty()) raise(Errc::EmptyChain, "fingerprint of an empty chain");
  return fingerprint_of_entries(chain.entries);
}

CertProjection make_projection(const CertChain& chain, const HashParams& params) {
  params.validate();
  return CertProjection{params.p, project_chain(chain.entries, params)};
}

std::optional<std::uint32_t> first_divergence(const CertProjection& mine,
                                              const CertProjection& published) {
  if (mine.p != published.p)
    raise(Errc::MalformedProjection, "projection widths differ");

  const std::uint32_t n = std::min(mine.length(), published.length());

  auto differs = [&](std::uint32_t i) { return mine.items[i - 1] != published.items[i - 1]; };

  auto scan = [&](std::uint32_t from, std::uint32_t to) -> std::optional<std::uint32_t> {
    for (std::uint32_t i = from; i <= to; ++i)
      if (differs(i)) return i;
    return std::nullopt;
  };

  if (n == 0 || !differs(n)) {
    // No anchor for bisection; resolve by scanning the whole prefix.
    if (auto hit = scan(1, n)) return hit;
    if (mine.length() != published.length())
      raise(Errc::LengthMismatchBeyondDivergence,
            "lengths " + std::to_string(mine.length()) + " vs " +
                std::to_string(published.length()));
    return std::nullopt;
  }

  std::uint32_t lo = 0;  // known equal (0 = virtual agreed start)
  std::uint32_t hi = n;  // known divergent
  while (hi - lo > 8) {
    const std::uint32_t mid = lo + (hi - lo) / 2;
    if (differs(mid))
      hi = mid;
    else
      lo = mid;
  }
  return scan(lo + 1, hi);
}

VerificationProof make_verification_proof(const Secret& s, ParticipantId id) {
  if (id.id == 0) raise(Errc::UndefinedId, "participant id 0 is reserved");
  return VerificationProof{id, hash_H(combine(encode(id.as_value()), s.s))};
}

bool check_verification_proof(const Secret& s, const VerificationProof& proof) {
  if (proof.id.id == 0) return false;
  return proof.prf == hash_H(combine(encode(proof.id.as_value()), s.s));
}

namespace {
constexpr char kChainMagic[4] = {'S', 'C', 'C', '1'};
constexpr char kProjectionMagic[4] = {'S', 'C', 'P', '1'};
}  // namespace

Bytes write_chain_file(const CertChain& chain) {
  Bytes out;
  out.reserve(8 + Digest::kSize * (chain.entries.size() + 1));
  out.insert(out.end(), kChainMagic, kChainMagic + 4);
  append_u32_be(out, chain.length());
  append_bytes(out, chain.c0.bytes);
  for (const Digest& c : chain.entries) append_bytes(out, c.bytes);
  return out;
}

CertChain read_chain_file(const Bytes& data) {
  if (data.size() < 8 + Digest::kSize || !std::equal(kChainMagic, kChainMagic + 4, data.begin()))
    raise(Errc::MalformedChain, "bad magic or truncated header");
  const std::uint32_t n = read_u32_be({data.data() + 4, 4});
  if (data.size() != 8 + Digest::kSize * (static_cast<std::size_t>(n) + 1))
    raise(Errc::MalformedChain, "size does not match entry count");
  CertChain chain;
  std::copy_n(data.begin() + 8, Digest::kSize, chain.c0.bytes.begin());
  chain.entries.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::copy_n(data.begin() + 8 + Digest::kSize * (static_cast<std::size_t>(i) + 1), Digest::kSize,
                chain.entries[i].bytes.begin());
  }
  return chain;
}

Bytes write_projection_file(const CertProjection& cp) {
  HashParams{256, cp.p}.validate();
  const std::uint32_t item_bytes = (cp.p + 7) / 8;
  Bytes out;
  out.reserve(10 + item_bytes * cp.items.size());
  out.insert(out.end(), kProjectionMagic, kProjectionMagic + 4);
  append_u16_be(out, static_cast<std::uint16_t>(cp.p));
  append_u32_be(out, cp.length());
  for (const Projection& item : cp.items) {
    for (std::uint32_t b = item_bytes; b-- > 0;)
      out.push_back(static_cast<std::uint8_t>(item.bits >> (8 * b)));
  }
  return out;
}

CertProjection read_projection_file(const Bytes& data) {
  if (data.size() < 10 || !std::equal(kProjectionMagic, kProjectionMagic + 4, data.begin()))
    raise(Errc::MalformedProjection, "bad magic or truncated header");
  const std::uint16_t p = read_u16_be({data.data() + 4, 2});
  HashParams params{256, p};
  params.validate();
  const std::uint32_t n = read_u32_be({data.data() + 6, 4});
  const std::uint32_t item_bytes = (p + 7) / 8;
  if (data.size() != 10 + static_cast<std::size_t>(item_bytes) * n)
    raise(Errc::MalformedProjection, "size does not match item count");
  CertProjection cp;
  cp.p = p;
  cp.items.resize(n);
  const std::uint64_t mask = p == 64 ? ~0ull : ((1ull << p) - 1);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint64_t acc = 0;
    for (std::uint32_t b = 0; b < item_bytes; ++b)
      acc = (acc << 8) | data[10 + static_cast<std::size_t>(i) * item_bytes + b];
    if ((acc & ~mask) != 0) raise(Errc::MalformedProjection, "item exceeds p bits");
    cp.items[i].bits = acc;
  }
  return cp;
}

}  // namespace safecomp
