#pragma once

// The five Euclidean quadratic rings Z[w] (plus Z itself) and exact,
// overflow-checked arithmetic on their elements a + b*w.
//
// Every ring is described by the minimal polynomial w^2 = s*w - n of its
// basis element, so that
//     (a + b w)(c + d w) = (ac - n bd) + (ad + bc + s bd) w
//     conj(a + b w)      = (a + s b) - b w
//     N(a + b w)         = a^2 + s ab + n b^2.

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kfree/checked.hpp"
#include "kfree/errors.hpp"

namespace kfree {

enum class RingId { gauss, eisenstein, sqrt2, golden, sqrt3, rational };

inline constexpr std::array<RingId, 5> kQuadraticRings{RingId::gauss, RingId::eisenstein, RingId::sqrt2,
                                                       RingId::golden, RingId::sqrt3};

inline std::string_view ring_name(RingId id) {
    switch (id) {
        case RingId::gauss: return "gauss";
        case RingId::eisenstein: return "eisenstein";
        case RingId::sqrt2: return "sqrt2";
        case RingId::golden: return "golden";
        case RingId::sqrt3: return "sqrt3";
        case RingId::rational: return "rational";
    }
    return "?";
}

inline RingId parse_ring_id(std::string_view name) {
    for (RingId id : {RingId::gauss, RingId::eisenstein, RingId::sqrt2, RingId::golden, RingId::sqrt3,
                      RingId::rational}) {
        if (ring_name(id) == name) return id;
    }
    throw ConfigError("unknown ring identifier '" + std::string(name) + "'");
}

/// Minimal-polynomial data w^2 = trace*w - norm of the basis element.
struct OmegaPoly {
    i64 trace;
    i64 norm;
};

inline constexpr OmegaPoly omega_poly(RingId id) {
    switch (id) {
        case RingId::gauss: return {0, 1};
        case RingId::eisenstein: return {-1, 1};
        case RingId::sqrt2: return {0, -2};
        case RingId::golden: return {1, -1};
        case RingId::sqrt3: return {0, -3};
        case RingId::rational: return {0, 0};
    }
    return {0, 0};
}

inline constexpr int ring_degree(RingId id) { return id == RingId::rational ? 1 : 2; }

inline constexpr bool is_real_quadratic(RingId id) {
    return id == RingId::sqrt2 || id == RingId::golden || id == RingId::sqrt3;
}

/// Element a + b*w of a ring; b is always 0 in the rational ring.
struct QuadInt {
    i64 a = 0;
    i64 b = 0;
    RingId ring = RingId::gauss;

    constexpr QuadInt() = default;
    constexpr QuadInt(i64 a_, i64 b_, RingId r) : a(a_), b(b_), ring(r) {}

    static constexpr QuadInt one(RingId r) { return {1, 0, r}; }
    static constexpr QuadInt zero(RingId r) { return {0, 0, r}; }
    static constexpr QuadInt omega(RingId r) { return {0, 1, r}; }

    constexpr bool is_zero() const { return a == 0 && b == 0; }

    friend constexpr bool operator==(const QuadInt&, const QuadInt&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const QuadInt& x) {
    return os << "(" << x.a << "," << x.b << ")@" << ring_name(x.ring);
}

namespace detail {
inline void same_ring(const QuadInt& x, const QuadInt& y) {
    if (x.ring != y.ring) throw DomainError("ring mismatch between operands");
}
}  // namespace detail

inline QuadInt operator+(const QuadInt& x, const QuadInt& y) {
    detail::same_ring(x, y);
    return {checked::add(x.a, y.a), checked::add(x.b, y.b), x.ring};
}

inline QuadInt operator-(const QuadInt& x, const QuadInt& y) {
    detail::same_ring(x, y);
    return {checked::sub(x.a, y.a), checked::sub(x.b, y.b), x.ring};
}

inline QuadInt operator-(const QuadInt& x) { return {checked::neg(x.a), checked::neg(x.b), x.ring}; }

namespace detail {
struct Wide {
    i128 a, b;
};

inline Wide mul_wide(const QuadInt& x, const QuadInt& y) {
    same_ring(x, y);
    const auto [s, n] = omega_poly(x.ring);
    const i128 bd = checked::mul128(x.b, y.b);
    const i128 re = checked::add128(checked::mul128(x.a, y.a), checked::mul128(-static_cast<i128>(n), bd));
    const i128 im = checked::add128(checked::add128(checked::mul128(x.a, y.b), checked::mul128(x.b, y.a)),
                                    checked::mul128(s, bd));
    return {re, im};
}
}  // namespace detail

inline QuadInt mul(const QuadInt& x, const QuadInt& y) {
    const detail::Wide w = detail::mul_wide(x, y);
    return {checked::narrow(w.a), checked::narrow(w.b), x.ring};
}

inline QuadInt operator*(const QuadInt& x, const QuadInt& y) { return mul(x, y); }

inline QuadInt scale(const QuadInt& x, i64 c) { return {checked::mul(x.a, c), checked::mul(x.b, c), x.ring}; }

inline QuadInt conj(const QuadInt& x) {
    if (x.ring == RingId::rational) return x;
    const i64 s = omega_poly(x.ring).trace;
    return {checked::add(x.a, checked::mul(s, x.b)), checked::neg(x.b), x.ring};
}

namespace detail {
inline i128 norm_wide(const QuadInt& x) {
    if (x.ring == RingId::rational) return x.a;
    const auto [s, n] = omega_poly(x.ring);
    i128 v = checked::mul128(x.a, x.a);
    v = checked::add128(v, checked::mul128(checked::mul128(s, x.a), x.b));
    return checked::add128(v, checked::mul128(checked::mul128(n, x.b), x.b));
}
}  // namespace detail

/// Field norm x * conj(x); equals x itself in the rational ring.
inline i64 norm(const QuadInt& x) { return checked::narrow(detail::norm_wide(x)); }

inline i64 abs_norm(const QuadInt& x) { return checked::abs(norm(x)); }

/// Trace x + conj(x).
inline i64 trace(const QuadInt& x) {
    if (x.ring == RingId::rational) return x.a;
    return checked::add(checked::mul(2, x.a), checked::mul(omega_poly(x.ring).trace, x.b));
}

inline QuadInt pow(QuadInt base, int e) {
    if (e < 0) throw DomainError("negative exponent; use unit_power for units");
    QuadInt r = QuadInt::one(base.ring);
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

namespace detail {
/// x / d as the fraction num / den with den an integer: num = x * conj(d),
/// den = N(d), kept in 128 bits; in the rational ring simply x / d.
struct Fraction {
    Wide num;
    i128 den;
};

inline Fraction as_fraction(const QuadInt& x, const QuadInt& d) {
    same_ring(d, x);
    if (d.is_zero()) throw DomainError("division by zero");
    if (x.ring == RingId::rational) return {{x.a, x.b}, d.a};
    return {mul_wide(x, conj(d)), norm_wide(d)};
}
}  // namespace detail

/// True iff d divides x in the ring (d != 0).
inline bool divides(const QuadInt& d, const QuadInt& x) {
    const auto [num, den] = detail::as_fraction(x, d);
    return num.a % den == 0 && num.b % den == 0;
}

/// x / d, which must be exact.
inline QuadInt exact_div(const QuadInt& x, const QuadInt& d) {
    const auto [num, den] = detail::as_fraction(x, d);
    if (num.a % den != 0 || num.b % den != 0) throw DomainError("inexact division");
    return {checked::narrow(num.a / den), checked::narrow(num.b / den), x.ring};
}

/// Euclidean quotient: x / y with each coordinate rounded to the nearest
/// integer. For all five rings this leaves a remainder of strictly smaller
/// absolute norm.
inline QuadInt round_quotient(const QuadInt& x, const QuadInt& y) {
    const auto [num, den] = detail::as_fraction(x, y);
    return {round_div(num.a, den), round_div(num.b, den), x.ring};
}

struct SplittingRule {
    i64 modulus;
    std::vector<i64> split_residues;
    std::vector<i64> inert_residues;
};

/// Complete description of one ring.
struct RingSpec {
    RingId id;
    std::string_view name;
    std::string_view omega_desc;
    int degree;
    /// N(a + b w) = c0 a^2 + c1 ab + c2 b^2 (degree-2 rings only).
    std::array<i64, 3> norm_coeffs;
    std::optional<QuadInt> fundamental_unit;
    std::vector<QuadInt> torsion_units;
    std::vector<i64> ramified_primes;
    SplittingRule splitting;

    bool has_infinite_units() const { return fundamental_unit.has_value(); }
};

inline RingSpec make_ring(RingId id) {
    const auto [s, n] = omega_poly(id);
    RingSpec r{id, ring_name(id), "", ring_degree(id), {1, s, n}, std::nullopt, {}, {}, {}};
    auto q = [id](i64 a, i64 b) { return QuadInt{a, b, id}; };
    switch (id) {
        case RingId::gauss:
            r.omega_desc = "i";
            r.torsion_units = {q(1, 0), q(0, 1), q(-1, 0), q(0, -1)};
            r.ramified_primes = {2};
            r.splitting = {4, {1}, {3}};
            break;
        case RingId::eisenstein:
            r.omega_desc = "rho";
            // (-rho)^m for m = 0..5
            r.torsion_units = {q(1, 0), q(0, -1), q(-1, -1), q(-1, 0), q(0, 1), q(1, 1)};
            r.ramified_primes = {3};
            r.splitting = {3, {1}, {2}};
            break;
        case RingId::sqrt2:
            r.omega_desc = "sqrt2";
            r.fundamental_unit = q(1, 1);
            r.torsion_units = {q(1, 0), q(-1, 0)};
            r.ramified_primes = {2};
            r.splitting = {8, {1, 7}, {3, 5}};
            break;
        case RingId::golden:
            r.omega_desc = "tau";
            r.fundamental_unit = q(0, 1);
            r.torsion_units = {q(1, 0), q(-1, 0)};
            r.ramified_primes = {5};
            r.splitting = {5, {1, 4}, {2, 3}};
            break;
        case RingId::sqrt3:
            r.omega_desc = "sqrt3";
            r.fundamental_unit = q(2, 1);
            r.torsion_units = {q(1, 0), q(-1, 0)};
            r.ramified_primes = {2, 3};
            r.splitting = {12, {1, 11}, {5, 7}};
            break;
        case RingId::rational:
            r.omega_desc = "";
            r.norm_coeffs = {1, 0, 0};
            r.torsion_units = {q(1, 0), q(-1, 0)};
            r.splitting = {1, {}, {0}};
            break;
    }
    return r;
}

inline RingSpec make_ring(std::string_view name) { return make_ring(parse_ring_id(name)); }

inline bool is_unit(const QuadInt& x) { return !x.is_zero() && abs_norm(x) == 1; }

/// c_n of the two-term recursion c_{n+1} = T c_n - N c_{n-1}, c_0 = 0,
/// c_1 = 1, where T and N are trace and norm of the fundamental unit.
/// Then unit^n = c_n * unit - N * c_{n-1}.
inline i64 unit_sequence(const RingSpec& ring, int n) {
    if (!ring.fundamental_unit) throw DomainError("ring has a finite unit group");
    const i64 t = trace(*ring.fundamental_unit);
    const i64 nu = norm(*ring.fundamental_unit);  // +-1
    i64 prev = 0, cur = 1;                          // c_0, c_1
    if (n == 0) return 0;
    if (n > 0) {
        for (int i = 1; i < n; ++i) {
            i64 next = checked::sub(checked::mul(t, cur), checked::mul(nu, prev));
            prev = cur;
            cur = next;
        }
        return cur;
    }
    // walk downwards: c_{m-1} = nu * (T c_m - c_{m+1})
    i64 hi = 1, lo = 0;  // c_1, c_0
    for (int m = 0; m > n; --m) {
        i64 below = checked::mul(nu, checked::sub(checked::mul(t, lo), hi));
        hi = lo;
        lo = below;
    }
    return lo;
}

/// unit^n for rings with an infinite unit group, |n| <= 80.
inline QuadInt unit_power(const RingSpec& ring, int n) {
    if (!ring.fundamental_unit) throw DomainError("unit_power needs an infinite unit group");
    if (n > 80 || n < -80) throw DomainError("unit exponent out of range (|n| <= 80)");
    const QuadInt& u = *ring.fundamental_unit;
    const i64 cn = unit_sequence(ring, n);
    const i64 cprev = unit_sequence(ring, n - 1);
    const QuadInt r = scale(u, cn) - scale(QuadInt::one(ring.id), checked::mul(norm(u), cprev));
    if (abs_norm(r) != 1) throw ArithmeticError("unit_power produced a non-unit");
    return r;
}

}  // namespace kfree
