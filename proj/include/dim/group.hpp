// Multiplicative group arithmetic for the key exchange.  Group elements and
// exponents travel as big-endian minimal byte strings; the bignum work is
// done with OpenSSL BIGNUMs inside group.cpp.
//
// Two groups are provided: the production 2048-bit safe-prime group (RFC 3526
// group 14, generator 2) and a tiny test group (p = 23, g = 5) whose values
// can be checked by hand.
#pragma once

#include "dim/bytes.hpp"

namespace dim {

struct DhGroup {
    Bytes p;      // modulus, big-endian
    Bytes g;      // generator
    Bytes order;  // order of <g>; (p-1)/2 for the safe-prime group
};

// RFC 3526 2048-bit MODP group; secrets drawn against it use 256-bit short
// exponents (see draw_secret), which keeps modexp cost flat while staying
// well above the 112-bit strength of the modulus itself.
const DhGroup& production_group();

// p = 23, g = 5 (order 22).  Test-sized only.
const DhGroup& toy_group();

// r = b^e mod m
Bytes mod_exp(const Bytes& b, const Bytes& e, const Bytes& m);

// Strictly 1 < v < p-1.  Rejects the degenerate elements an active peer
// could send to force a known shared secret.
bool valid_element(const Bytes& v, const DhGroup& group);

// Big-endian minimal comparison helpers (leading zeros stripped on input).
Bytes trim_leading_zeros(Bytes v);
int compare_bytes(const Bytes& a, const Bytes& b);

// Draw a nonzero secret exponent below the group order from a seeded DRBG.
// Production group: uniform 256-bit value.  Smaller groups: uniform in
// [1, order-1].
class HashDrbg;
Bytes draw_secret(HashDrbg& drbg, const DhGroup& group);

}  // namespace dim
