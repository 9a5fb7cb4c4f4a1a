// Compact SHA-256, used for content hashes in manifests and ball headers.

#pragma once

#include <cstdint>
#include <string>

namespace conelab {

std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::string& path); // throws on IO error

} // namespace conelab
