#pragma once

#include <cstdint>
#include <string_view>

#include "safecomp/hashing.hpp"

namespace safecomp {

/// Content digest of a canonical task descriptor; the registry key the
/// arbiter resolves step functions through.
inline Digest task_descriptor_id(std::string_view name, std::uint64_t version) {
  return hash_H(encode(Value::tuple({Value::bytes(bytes_of("safecomp/task")),
                                     Value::bytes(bytes_of(name)), Value::nat(version)})));
}

}  // namespace safecomp
