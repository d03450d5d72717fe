#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace thinslice {

/// Hex-encoded SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// First 8 bytes of SHA-256(data) interpreted as a big-endian unsigned integer.
/// Stable across platforms; used for deterministic mock ratings and cache keys.
std::uint64_t digest_u64(std::string_view data);

}  // namespace thinslice
