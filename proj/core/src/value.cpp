#include "safecomp/value.hpp"

#include <algorithm>
#include <sstream>

#include "safecomp/errors.hpp"

namespace safecomp {

Natural::Natural(std::uint64_t v) {
  if (v != 0) limbs_.push_back(static_cast<std::uint32_t>(v));
  if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
}

void Natural::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

std::uint64_t Natural::as_u64() const {
  if (!fits_u64()) raise(Errc::BadArgument, "natural exceeds 64 bits");
  std::uint64_t v = 0;
  if (limbs_.size() > 1) v = static_cast<std::uint64_t>(limbs_[1]) << 32;
  if (!limbs_.empty()) v |= limbs_[0];
  return v;
}

Natural Natural::from_bytes_be(std::span<const std::uint8_t> bytes) {
  Natural n;
  for (std::uint8_t b : bytes) {
    // n = n*256 + b
    std::uint64_t carry = b;
    for (auto& limb : n.limbs_) {
      const std::uint64_t cur = (static_cast<std::uint64_t>(limb) << 8) | carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) n.limbs_.push_back(static_cast<std::uint32_t>(carry));
  }
  n.trim();
  return n;
}

Bytes Natural::to_bytes_be() const {
  if (is_zero()) return Bytes{0x00};
  Bytes out;
  out.reserve(limbs_.size() * 4);
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    out.push_back(static_cast<std::uint8_t>(*it >> 24));
    out.push_back(static_cast<std::uint8_t>(*it >> 16));
    out.push_back(static_cast<std::uint8_t>(*it >> 8));
    out.push_back(static_cast<std::uint8_t>(*it));
  }
  const auto first = std::find_if(out.begin(), out.end(), [](std::uint8_t b) { return b != 0; });
  out.erase(out.begin(), first);
  return out;
}

Natural Natural::from_decimal(std::string_view text) {
  if (text.empty()) raise(Errc::BadArgument, "empty decimal literal");
  Natural n;
  for (char c : text) {
    if (c < '0' || c > '9') raise(Errc::BadArgument, "invalid decimal digit");
    std::uint64_t carry = static_cast<std::uint64_t>(c - '0');
    for (auto& limb : n.limbs_) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limb) * 10 + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) n.limbs_.push_back(static_cast<std::uint32_t>(carry));
  }
  n.trim();
  return n;
}

std::string Natural::to_decimal() const {
  if (is_zero()) return "0";
  std::vector<std::uint32_t> work = limbs_;
  std::string out;
  while (!work.empty()) {
    // divide by 10^9, collecting the remainder
    std::uint64_t rem = 0;
    for (auto it = work.rbegin(); it != work.rend(); ++it) {
      const std::uint64_t cur = (rem << 32) | *it;
      *it = static_cast<std::uint32_t>(cur / 1000000000ull);
      rem = cur % 1000000000ull;
    }
    while (!work.empty() && work.back() == 0) work.pop_back();
    std::string chunk = std::to_string(rem);
    if (!work.empty()) chunk.insert(0, 9 - chunk.size(), '0');
    out.insert(0, chunk);
  }
  return out;
}

Natural Natural::plus(const Natural& other) const {
  Natural res;
  const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
  res.limbs_.resize(n, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t cur = carry;
    if (i < limbs_.size()) cur += limbs_[i];
    if (i < other.limbs_.size()) cur += other.limbs_[i];
    res.limbs_[i] = static_cast<std::uint32_t>(cur);
    carry = cur >> 32;
  }
  if (carry) res.limbs_.push_back(static_cast<std::uint32_t>(carry));
  return res;
}

Natural Natural::times(const Natural& other) const {
  if (is_zero() || other.is_zero()) return Natural();
  Natural res;
  res.limbs_.assign(limbs_.size() + other.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < other.limbs_.size(); ++j) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) * other.limbs_[j] +
                                res.limbs_[i + j] + carry;
      res.limbs_[i + j] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    res.limbs_[i + other.limbs_.size()] += static_cast<std::uint32_t>(carry);
  }
  res.trim();
  return res;
}

Natural Natural::minus_one() const {
  if (is_zero()) raise(Errc::BadArgument, "decrement of zero");
  Natural res = *this;
  for (auto& limb : res.limbs_) {
    if (limb != 0) {
      --limb;
      break;
    }
    limb = 0xffffffffu;
  }
  res.trim();
  return res;
}

std::strong_ordering Natural::operator<=>(const Natural& other) const {
  if (limbs_.size() != other.limbs_.size())
    return limbs_.size() <=> other.limbs_.size();
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != other.limbs_[i]) return limbs_[i] <=> other.limbs_[i];
  }
  return std::strong_ordering::equal;
}

Natural zigzag(std::int64_t v) {
  const std::uint64_t u = (static_cast<std::uint64_t>(v) << 1) ^
                          static_cast<std::uint64_t>(v >> 63);
  return Natural(u);
}

std::int64_t unzigzag(const Natural& n) {
  const std::uint64_t u = n.as_u64();
  return static_cast<std::int64_t>((u >> 1) ^ (~(u & 1) + 1));
}

Value::Value(std::vector<Value> items, Kind kind) : rep_(Composite{kind, std::move(items)}) {}

Value::Kind Value::kind() const {
  if (std::holds_alternative<Natural>(rep_)) return Kind::Nat;
  if (std::holds_alternative<Bytes>(rep_)) return Kind::Bytes;
  return std::get<Composite>(rep_).kind;
}

const Natural& Value::as_nat() const {
  if (!std::holds_alternative<Natural>(rep_)) raise(Errc::BadArgument, "value is not a natural");
  return std::get<Natural>(rep_);
}

const Bytes& Value::as_bytes() const {
  if (!std::holds_alternative<Bytes>(rep_)) raise(Errc::BadArgument, "value is not a byte string");
  return std::get<Bytes>(rep_);
}

const std::vector<Value>& Value::items() const {
  if (!std::holds_alternative<Composite>(rep_)) raise(Errc::BadArgument, "value is not composite");
  return std::get<Composite>(rep_).items;
}

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::Nat:
      return as_nat().to_decimal();
    case Kind::Bytes:
      return "0x" + to_hex(as_bytes());
    case Kind::Tuple:
    case Kind::List: {
      std::ostringstream os;
      os << (kind() == Kind::Tuple ? '{' : '[');
      bool first = true;
      for (const auto& item : items()) {
        if (!first) os << ',';
        os << item.to_string();
        first = false;
      }
      os << (kind() == Kind::Tuple ? '}' : ']');
      return os.str();
    }
  }
  return "?";
}

namespace {

constexpr std::size_t kMaxPayload = 0xffffffffu;

void encode_into(const Value& v, Bytes& out);

void encode_payload(const Value& v, Bytes& payload) {
  switch (v.kind()) {
    case Value::Kind::Nat:
      payload = v.as_nat().to_bytes_be();
      break;
    case Value::Kind::Bytes:
      payload = v.as_bytes();
      break;
    case Value::Kind::Tuple:
    case Value::Kind::List:
      for (const auto& item : v.items()) encode_into(item, payload);
      break;
  }
}

void encode_into(const Value& v, Bytes& out) {
  Bytes payload;
  encode_payload(v, payload);
  if (payload.size() > kMaxPayload) raise(Errc::UnencodableValue, "payload exceeds 32-bit length");
  out.push_back(static_cast<std::uint8_t>(v.kind()));
  append_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  append_bytes(out, payload);
}

Value decode_one(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 5 > in.size()) raise(Errc::UnencodableValue, "truncated header");
  const std::uint8_t tag = in[pos];
  const std::uint32_t len = read_u32_be(in.subspan(pos + 1, 4));
  pos += 5;
  if (pos + len > in.size()) raise(Errc::UnencodableValue, "truncated payload");
  const auto payload = in.subspan(pos, len);
  pos += len;

  switch (static_cast<Value::Kind>(tag)) {
    case Value::Kind::Nat: {
      if (payload.empty()) raise(Errc::UnencodableValue, "empty natural payload");
      if (payload.size() > 1 && payload[0] == 0x00)
        raise(Errc::UnencodableValue, "non-canonical natural");
      return Value::nat(Natural::from_bytes_be(payload));
    }
    case Value::Kind::Bytes:
      return Value::bytes(Bytes(payload.begin(), payload.end()));
    case Value::Kind::Tuple:
    case Value::Kind::List: {
      std::vector<Value> items;
      std::size_t inner = 0;
      while (inner < payload.size()) items.push_back(decode_one(payload, inner));
      return static_cast<Value::Kind>(tag) == Value::Kind::Tuple
                 ? Value::tuple(std::move(items))
                 : Value::list(std::move(items));
    }
    default:
      raise(Errc::UnencodableValue, "unregistered tag " + std::to_string(tag));
  }
}

}  // namespace

EncodedValue encode(const Value& v) {
  Bytes out;
  encode_into(v, out);
  return out;
}

Value decode(const EncodedValue& bytes) {
  std::size_t pos = 0;
  Value v = decode_one(bytes, pos);
  if (pos != bytes.size()) raise(Errc::UnencodableValue, "trailing bytes after value");
  return v;
}

}  // namespace safecomp
