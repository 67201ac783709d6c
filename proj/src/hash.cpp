#include "dim/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace dim {

Bytes sha256_cat(std::initializer_list<std::span<const uint8_t>> parts) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("sha256: EVP_MD_CTX_new failed");
    Bytes out(kDigestSize);
    unsigned int len = 0;
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1;
    for (auto part : parts)
        ok = ok && EVP_DigestUpdate(ctx, part.data(), part.size()) == 1;
    ok = ok && EVP_DigestFinal_ex(ctx, out.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok || len != kDigestSize) throw std::runtime_error("sha256: digest failed");
    return out;
}

Bytes sha256(std::span<const uint8_t> data) { return sha256_cat({data}); }

}  // namespace dim
