#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace dv {

// CRC-32 (IEEE 802.3 polynomial), used as the weight-file trailer checksum.
uint32_t crc32(const void* data, size_t len, uint32_t seed = 0);

// FNV-1a 64-bit, used for config hashes embedded in run manifests.
uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64(const std::string& s);

// Lower-case hex rendering of a 64-bit hash.
std::string hex64(uint64_t value);

}  // namespace dv
