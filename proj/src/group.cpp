#include "dim/group.hpp"

#include <openssl/bn.h>

#include <memory>
#include <stdexcept>

#include "dim/errors.hpp"
#include "dim/rng.hpp"

namespace dim {

namespace {

// RFC 3526, 2048-bit MODP group (group 14).
constexpr const char* kGroup14PrimeHex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

struct BnDeleter {
    void operator()(BIGNUM* bn) const { BN_free(bn); }
    void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnDeleter>;

BnPtr to_bn(const Bytes& v) {
    BnPtr bn(BN_bin2bn(v.data(), static_cast<int>(v.size()), nullptr));
    if (!bn) throw std::runtime_error("BN_bin2bn failed");
    return bn;
}

Bytes from_bn(const BIGNUM* bn) {
    Bytes out(static_cast<size_t>(BN_num_bytes(bn)));
    if (!out.empty()) BN_bn2bin(bn, out.data());
    return out;  // minimal encoding; zero encodes as empty
}

DhGroup make_production_group() {
    BIGNUM* p_raw = nullptr;
    if (!BN_hex2bn(&p_raw, kGroup14PrimeHex)) throw std::runtime_error("bad group constant");
    BnPtr p(p_raw);
    BnPtr order(BN_new());
    BnCtxPtr ctx(BN_CTX_new());
    // order of <2> is (p-1)/2 for this safe prime
    BN_sub(order.get(), p.get(), BN_value_one());
    BN_rshift1(order.get(), order.get());
    DhGroup group;
    group.p = from_bn(p.get());
    group.g = {0x02};
    group.order = from_bn(order.get());
    return group;
}

}  // namespace

const DhGroup& production_group() {
    static const DhGroup group = make_production_group();
    return group;
}

const DhGroup& toy_group() {
    static const DhGroup group{{23}, {5}, {22}};
    return group;
}

Bytes mod_exp(const Bytes& b, const Bytes& e, const Bytes& m) {
    BnPtr bb = to_bn(b), be = to_bn(e), bm = to_bn(m);
    BnPtr r(BN_new());
    BnCtxPtr ctx(BN_CTX_new());
    if (!r || !ctx || BN_mod_exp(r.get(), bb.get(), be.get(), bm.get(), ctx.get()) != 1)
        throw std::runtime_error("BN_mod_exp failed");
    return from_bn(r.get());
}

Bytes trim_leading_zeros(Bytes v) {
    size_t i = 0;
    while (i + 1 < v.size() && v[i] == 0) ++i;
    if (i > 0) v.erase(v.begin(), v.begin() + static_cast<long>(i));
    if (v.size() == 1 && v[0] == 0) return {};
    return v;
}

int compare_bytes(const Bytes& a, const Bytes& b) {
    Bytes ta = trim_leading_zeros(a), tb = trim_leading_zeros(b);
    if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
    for (size_t i = 0; i < ta.size(); ++i)
        if (ta[i] != tb[i]) return ta[i] < tb[i] ? -1 : 1;
    return 0;
}

bool valid_element(const Bytes& v, const DhGroup& group) {
    BnPtr bv = to_bn(v), bp = to_bn(group.p);
    BnPtr pm1(BN_new());
    BN_sub(pm1.get(), bp.get(), BN_value_one());
    // reject 0, 1 and p-1 (and anything >= p)
    if (BN_is_zero(bv.get()) || BN_is_one(bv.get())) return false;
    if (BN_cmp(bv.get(), pm1.get()) >= 0) return false;
    return true;
}

Bytes draw_secret(HashDrbg& drbg, const DhGroup& group) {
    // Production-size groups get uniform 256-bit exponents (short-exponent
    // DH; far above the ~112-bit strength of the 2048-bit modulus).  Small
    // test groups draw uniformly in [1, order-1].
    if (group.order.size() > 32) {
        for (;;) {
            Bytes candidate = trim_leading_zeros(drbg.bytes(32));
            if (!candidate.empty()) return candidate;
        }
    }
    BnPtr border = to_bn(group.order);
    uint64_t order_u64 = 0;
    for (uint8_t byte : group.order) order_u64 = order_u64 << 8 | byte;
    if (order_u64 < 3) throw std::runtime_error("group order too small");
    uint64_t v = 1 + drbg.next_u64() % (order_u64 - 1);
    Bytes out;
    while (v > 0) {
        out.insert(out.begin(), static_cast<uint8_t>(v & 0xff));
        v >>= 8;
    }
    return out;
}

}  // namespace dim
