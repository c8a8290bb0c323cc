#pragma once

// Rational-integer number theory used underneath the quadratic rings:
// primes, trial-division factorisation, modular square roots, Bezout.

#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "kfree/checked.hpp"
#include "kfree/errors.hpp"

namespace kfree {

/// Largest |n| accepted by factor_integer (trial division stays cheap).
inline constexpr i64 kMaxFactorable = 1'000'000'000'000LL;

inline i64 gcd(i64 a, i64 b) {
    return static_cast<i64>(std::gcd(static_cast<std::uint64_t>(checked::abs(a)),
                                     static_cast<std::uint64_t>(checked::abs(b))));
}

struct Bezout {
    i64 g;
    i64 x;
    i64 y;
};

/// g = gcd(a, b) >= 0 together with x, y satisfying a*x + b*y = g.
inline Bezout ext_gcd(i64 a, i64 b) {
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = checked::sub(old_s, checked::mul(q, s));
        old_s = s;
        s = tmp;
        tmp = checked::sub(old_t, checked::mul(q, t));
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) return {checked::neg(old_r), checked::neg(old_s), checked::neg(old_t)};
    return {old_r, old_s, old_t};
}

inline i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<i128>(floor_mod(a, m)) * floor_mod(b, m)) % m);
}

inline i64 pow_mod(i64 base, std::uint64_t e, i64 m) {
    i64 result = 1 % m;
    base = floor_mod(base, m);
    while (e) {
        if (e & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return result;
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
inline i64 inverse_mod(i64 a, i64 m) {
    Bezout b = ext_gcd(floor_mod(a, m), m);
    if (b.g != 1) throw DomainError("no modular inverse: arguments not coprime");
    return floor_mod(b.x, m);
}

/// Deterministic Miller-Rabin for the full int64 range.
inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    i64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        i64 x = pow_mod(a, static_cast<std::uint64_t>(d), n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// All primes <= limit (sieve of Eratosthenes).
inline std::vector<i64> primes_up_to(i64 limit) {
    std::vector<i64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (i64 i = 2; i <= limit; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (i64 j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

/// Primes below 10^6, enough to trial-divide anything up to kMaxFactorable.
inline const std::vector<i64>& trial_primes() {
    static const std::vector<i64> table = primes_up_to(1'000'000);
    return table;
}

/// Prime factorisation of |n| as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<i64, int>> factor_integer(i64 n) {
    n = checked::abs(n);
    if (n == 0) throw DomainError("cannot factor zero");
    if (n > kMaxFactorable) throw ResourceError("integer too large for trial division");
    std::vector<std::pair<i64, int>> out;
    for (i64 p : trial_primes()) {
        if (p * p > n) break;
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// A square root of a modulo an odd prime p, or nullopt for non-residues.
inline std::optional<i64> sqrt_mod(i64 a, i64 p) {
    a = floor_mod(a, p);
    if (p == 2) return a;
    if (a == 0) return 0;
    if (pow_mod(a, static_cast<std::uint64_t>((p - 1) / 2), p) != 1) return std::nullopt;
    // Tonelli-Shanks
    i64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    i64 z = 2;
    while (pow_mod(z, static_cast<std::uint64_t>((p - 1) / 2), p) != p - 1) ++z;
    i64 m = s;
    i64 c = pow_mod(z, static_cast<std::uint64_t>(q), p);
    i64 t = pow_mod(a, static_cast<std::uint64_t>(q), p);
    i64 r = pow_mod(a, static_cast<std::uint64_t>((q + 1) / 2), p);
    while (t != 1) {
        i64 i = 0;
        i64 tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, p);
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

/// True iff no prime power p^k divides n (n != 0).
inline bool is_k_free_integer(i64 n, int k) {
    for (auto [p, e] : factor_integer(n)) {
        if (e >= k) return false;
    }
    return true;
}

/// Checked integer power.
inline i64 ipow(i64 base, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r = checked::mul(r, base);
    return r;
}

}  // namespace kfree
