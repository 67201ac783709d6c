#include "dim/rng.hpp"

#include "dim/hash.hpp"

namespace dim {

void HashDrbg::refill() {
    Bytes block;
    block.reserve(16);
    put_u64be(block, seed_);
    put_u64be(block, counter_++);
    buffer_ = sha256(as_span(block));
    used_ = 0;
}

Bytes HashDrbg::bytes(size_t n) {
    Bytes out;
    out.reserve(n);
    while (out.size() < n) {
        if (used_ >= buffer_.size()) refill();
        size_t take = std::min(n - out.size(), buffer_.size() - used_);
        out.insert(out.end(), buffer_.begin() + used_, buffer_.begin() + used_ + take);
        used_ += take;
    }
    return out;
}

uint64_t HashDrbg::next_u64() {
    Bytes b = bytes(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
    return v;
}

}  // namespace dim
