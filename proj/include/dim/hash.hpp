// SHA-256 wrapper over OpenSSL's EVP interface.  All digests in the project
// (commitments, block digests, key derivation, challenge bindings) go through
// these two functions.
#pragma once

#include <initializer_list>
#include <span>

#include "dim/bytes.hpp"

namespace dim {

inline constexpr size_t kDigestSize = 32;

Bytes sha256(std::span<const uint8_t> data);

// Digest of the concatenation of several byte strings without building the
// intermediate buffer.
Bytes sha256_cat(std::initializer_list<std::span<const uint8_t>> parts);

inline std::span<const uint8_t> as_span(const Bytes& b) { return {b.data(), b.size()}; }
inline std::span<const uint8_t> as_span(const std::string& s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

}  // namespace dim
