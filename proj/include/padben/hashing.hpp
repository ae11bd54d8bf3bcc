#pragma once

#include <cstdint>
#include <string>

namespace padben {

// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

// SHA-256 of a file's contents. Throws ErrorCode::io if unreadable.
std::string sha256_file(const std::string& path);

// Non-cryptographic 64-bit content hash (FNV-1a) for mock providers and
// in-memory keying.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace padben
