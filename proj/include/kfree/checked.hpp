#pragma once

// Overflow-checked signed 64-bit helpers. Every coordinate computation in
// the library goes through these; wraparound is never silent.

#include <cstdint>
#include <limits>

#include "kfree/errors.hpp"

namespace kfree {

using i64 = std::int64_t;
using i128 = __int128;

namespace checked {

inline i64 add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError("int64 overflow in addition");
    return r;
}

inline i64 sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticError("int64 overflow in subtraction");
    return r;
}

inline i64 mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("int64 overflow in multiplication");
    return r;
}

inline i64 neg(i64 a) {
    if (a == std::numeric_limits<i64>::min()) throw ArithmeticError("int64 overflow in negation");
    return -a;
}

inline i64 abs(i64 a) { return a < 0 ? neg(a) : a; }

inline i128 add128(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError("int128 overflow in addition");
    return r;
}

inline i128 sub128(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticError("int128 overflow in subtraction");
    return r;
}

inline i128 mul128(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("int128 overflow in multiplication");
    return r;
}

inline i64 narrow(i128 v) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw ArithmeticError("value does not fit in int64");
    return static_cast<i64>(v);
}

}  // namespace checked

/// Floor division for b > 0.
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

/// Nonnegative remainder for b > 0.
inline i64 floor_mod(i64 a, i64 b) {
    i64 r = a % b;
    return r < 0 ? r + b : r;
}

/// Nearest integer to num/den (den != 0), halves rounded toward +infinity.
inline i64 round_div(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 t = checked::add128(checked::mul128(2, num), den);
    i128 d2 = checked::mul128(2, den);
    i128 q = t / d2;
    if ((t % d2 != 0) && (t < 0)) --q;
    return checked::narrow(q);
}

}  // namespace kfree
