#pragma once

// Associates, primes, gcd and factorisation in the quadratic rings.
//
// Canonical associates (the representative of x modulo units):
//   gauss       a > 0, b >= 0 (closed first quarter).
//   eisenstein  a > b >= 0 (the 60-degree sector spanned by 1 and 1 + rho).
//   real rings  the associate +-u^j x with a >= 0, b >= 0 and j minimal.
//               Multiplication by the fundamental unit has a nonnegative
//               matrix, so the set of such j is an up-set and the minimum
//               is unique.
//   rational    |x|.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "kfree/checked.hpp"
#include "kfree/errors.hpp"
#include "kfree/integer.hpp"
#include "kfree/ring.hpp"

namespace kfree {

struct Associate {
    QuadInt unit;  ///< x = unit * rep
    QuadInt rep;
};

namespace detail {

inline bool in_closed_quadrant(const QuadInt& x) { return x.a >= 0 && x.b >= 0 && !x.is_zero(); }

inline Associate canonical_real(const QuadInt& x, const RingSpec& ring) {
    const QuadInt u = *ring.fundamental_unit;
    const QuadInt u_inv = unit_power(ring, -1);
    QuadInt y = x;
    auto signed_into_quadrant = [](QuadInt& v) {
        if (in_closed_quadrant(v)) return true;
        if (in_closed_quadrant(-v)) {
            v = -v;
            return true;
        }
        return false;
    };
    // climb until +-y enters the quadrant
    int guard = 0;
    while (!signed_into_quadrant(y)) {
        y = mul(y, u);
        if (++guard > 400) throw ArithmeticError("canonical_associate failed to converge");
    }
    // descend while still inside
    for (;;) {
        QuadInt down = mul(y, u_inv);
        if (!signed_into_quadrant(down)) break;
        y = down;
        if (++guard > 800) throw ArithmeticError("canonical_associate failed to converge");
    }
    return {exact_div(x, y), y};
}

}  // namespace detail

/// Deterministic representative of the unit orbit of x (x != 0).
inline Associate canonical_associate(const QuadInt& x) {
    if (x.is_zero()) throw DomainError("canonical_associate of zero");
    const RingId id = x.ring;
    if (id == RingId::rational) {
        return x.a < 0 ? Associate{QuadInt{-1, 0, id}, -x} : Associate{QuadInt::one(id), x};
    }
    const RingSpec ring = make_ring(id);
    if (ring.has_infinite_units()) return detail::canonical_real(x, ring);
    for (const QuadInt& e : ring.torsion_units) {
        // rep = e^{-1} x; since e ranges over the whole unit group, so does e^{-1}
        const QuadInt rep = exact_div(x, e);
        const bool ok = id == RingId::gauss ? (rep.a > 0 && rep.b >= 0) : (rep.a > rep.b && rep.b >= 0);
        if (ok) return {e, rep};
    }
    throw ArithmeticError("no canonical associate found");  // unreachable
}

enum class PrimeTag { Ramified, Inert, Split };

inline std::string_view tag_name(PrimeTag t) {
    switch (t) {
        case PrimeTag::Ramified: return "ramified";
        case PrimeTag::Inert: return "inert";
        case PrimeTag::Split: return "split";
    }
    return "?";
}

/// Behaviour of a rational prime p in a ring, with canonical generators:
/// one for ramified/inert p, the pair (pi, pi*) for split p.
struct PrimeClass {
    PrimeTag tag;
    i64 p;
    std::vector<QuadInt> generators;
};

/// Canonical gcd; gcd(x, 0) = canonical rep of x.
inline QuadInt gcd(QuadInt x, QuadInt y) {
    detail::same_ring(x, y);
    auto wide_abs_norm = [](const QuadInt& v) {
        const i128 n = detail::norm_wide(v);
        return n < 0 ? -n : n;
    };
    if (x.is_zero() && y.is_zero()) throw DomainError("gcd(0, 0) is undefined");
    while (!y.is_zero()) {
        const QuadInt q = round_quotient(x, y);
        const QuadInt r = x - mul(q, y);
        if (!r.is_zero() && wide_abs_norm(r) >= wide_abs_norm(y)) throw ArithmeticError("Euclidean step did not reduce the norm");
        x = y;
        y = r;
    }
    return canonical_associate(x).rep;
}

namespace detail {

inline PrimeTag residue_tag(const RingSpec& ring, i64 p) {
    if (std::find(ring.ramified_primes.begin(), ring.ramified_primes.end(), p) != ring.ramified_primes.end())
        return PrimeTag::Ramified;
    const i64 r = floor_mod(p, ring.splitting.modulus);
    const auto& sp = ring.splitting.split_residues;
    if (std::find(sp.begin(), sp.end(), r) != sp.end()) return PrimeTag::Split;
    return PrimeTag::Inert;
}

/// A root t of w^2 - s w + n modulo p (p ramified or split).
inline i64 omega_root_mod(RingId id, i64 p) {
    const auto [s, n] = omega_poly(id);
    if (p == 2 || p == 3) {
        for (i64 t = 0; t < p; ++t) {
            if (floor_mod(t * t - s * t + n, p) == 0) return t;
        }
        throw DomainError("no root of the minimal polynomial modulo p");
    }
    // t = (s + sqrt(disc)) / 2
    const i64 disc = s * s - 4 * n;
    const auto root = sqrt_mod(disc, p);
    if (!root) throw DomainError("minimal polynomial has no root modulo p");
    return mul_mod(floor_mod(s + *root, p), inverse_mod(2, p), p);
}

}  // namespace detail

/// Classify the rational prime p in the given ring.
inline PrimeClass classify_prime(const RingSpec& ring, i64 p) {
    if (!is_prime(p)) throw DomainError("classify_prime: argument is not a rational prime");
    const RingId id = ring.id;
    if (id == RingId::rational) return {PrimeTag::Inert, p, {QuadInt{p, 0, id}}};
    const PrimeTag tag = detail::residue_tag(ring, p);
    if (tag == PrimeTag::Inert) return {tag, p, {QuadInt{p, 0, id}}};
    const i64 t = detail::omega_root_mod(id, p);
    const QuadInt pi = gcd(QuadInt{p, 0, id}, QuadInt{t, -1, id});
    if (abs_norm(pi) != p) throw ArithmeticError("prime above p has wrong norm");
    if (tag == PrimeTag::Ramified) return {tag, p, {pi}};
    QuadInt other = canonical_associate(conj(pi)).rep;
    // order the pair: larger first coordinate first, then larger second
    QuadInt first = pi, second = other;
    if (std::pair(second.a, second.b) > std::pair(first.a, first.b)) std::swap(first, second);
    return {tag, p, {first, second}};
}

/// A canonical prime element together with the rational prime below it.
struct RingPrime {
    QuadInt pi;
    i64 p;
    PrimeTag tag;
    i64 abs_norm;  ///< p, or p^2 when inert
};

/// All canonical primes with |N(pi)| <= bound, ordered by norm, then by
/// the classify_prime order.
inline std::vector<RingPrime> primes_up_to_norm(const RingSpec& ring, i64 bound) {
    std::vector<RingPrime> out;
    if (bound < 2) return out;
    const bool rational = ring.id == RingId::rational;
    for (i64 p : primes_up_to(bound)) {
        const PrimeClass pc = classify_prime(ring, p);
        if (pc.tag == PrimeTag::Inert && !rational) {
            if (p > bound / p) continue;
            out.push_back({pc.generators[0], p, pc.tag, p * p});
        } else {
            for (const QuadInt& g : pc.generators) out.push_back({g, p, pc.tag, p});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RingPrime& x, const RingPrime& y) { return x.abs_norm < y.abs_norm; });
    return out;
}

/// The rational prime p below a prime element (|N(pi)| is p or p^2).
inline i64 rational_prime_below(const QuadInt& pi) {
    const i64 n = abs_norm(pi);
    if (is_prime(n)) return n;
    for (const auto& [p, e] : factor_integer(n)) {
        if (e == 2 && p * p == n) return p;
    }
    throw DomainError("not a prime element");
}

inline PrimeTag prime_tag(const QuadInt& pi) {
    return classify_prime(make_ring(pi.ring), rational_prime_below(pi)).tag;
}

struct Factorization {
    QuadInt unit;
    std::vector<std::pair<QuadInt, int>> factors;

    /// unit * prod pi^e, recomputed.
    QuadInt product() const {
        QuadInt r = unit;
        for (const auto& [pi, e] : factors) r = mul(r, pow(pi, e));
        return r;
    }
};

/// Canonical factorisation: factor |N(x)| over Z, lift every rational prime
/// through classify_prime and strip the ring primes above it.
inline Factorization factor(const QuadInt& x) {
    if (x.is_zero()) throw DomainError("cannot factor zero");
    const RingId id = x.ring;
    const RingSpec ring = make_ring(id);
    Factorization f{QuadInt::one(id), {}};
    QuadInt rest = x;
    for (auto [p, e] : factor_integer(norm(x))) {
        (void)e;
        const PrimeClass pc = classify_prime(ring, p);
        for (const QuadInt& pi : pc.generators) {
            int count = 0;
            while (divides(pi, rest)) {
                rest = exact_div(rest, pi);
                ++count;
            }
            if (count > 0) f.factors.emplace_back(pi, count);
        }
    }
    if (!is_unit(rest)) throw ArithmeticError("factorisation left a non-unit cofactor");
    f.unit = rest;
    return f;
}

/// True iff no prime power pi^k divides x. Zero is never k-free.
inline bool is_k_free(const QuadInt& x, int k) {
    if (k < 2) throw DomainError("is_k_free needs k >= 2");
    if (x.is_zero()) return false;
    if (is_unit(x)) return true;
    for (const auto& [pi, e] : factor(x).factors) {
        if (e >= k) return false;
    }
    return true;
}

}  // namespace kfree
