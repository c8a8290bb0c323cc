#pragma once

// Reference constructions over kfree's value types (matrices, points) that
// are computed from the brute-force arithmetic in oracles.hpp.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kfree/symmetry.hpp"
#include "oracles.hpp"

namespace oracle {

using kfree::Point;
using kfree::UniMat;
using kfree::make_point;

// Matrix of x -> u x (or u conj(x)) from the images of 1 and w.
inline UniMat oracle_matrix(Ring r, Elt u, bool conjugate) {
    const Elt one = conjugate ? conj(r, {1, 0}) : Elt{1, 0};
    const Elt w = conjugate ? conj(r, {0, 1}) : Elt{0, 1};
    const Elt c0 = mul(r, u, one);
    const Elt c1 = mul(r, u, w);
    return UniMat{c0.a, c1.a, c0.b, c1.b};
}

// {x -> u x, x -> u conj(x) : u a unit}, restricted to entries <= E.
inline std::set<UniMat> oracle_group(const std::string& name, i64 E) {
    const Ring r = ring_of(name);
    std::vector<Elt> units;
    if (name == "gauss") units = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    else if (name == "eisenstein") units = {{1, 0}, {0, 1}, {-1, -1}, {-1, 0}, {0, -1}, {1, 1}};
    else {
        const Elt u = name == "sqrt2" ? Elt{1, 1} : name == "golden" ? Elt{0, 1} : Elt{2, 1};
        const i64 nu = norm(r, u);
        const Elt c = conj(r, u);
        const Elt inv{c.a * nu, c.b * nu};  // u^-1 = conj(u) / N(u), N(u) = +-1
        for (int sign : {1, -1}) {
            Elt up{sign, 0}, down{sign, 0};
            for (int a = 0; a < 12; ++a) {
                units.push_back(up);
                units.push_back(down);
                up = mul(r, up, u);
                down = mul(r, down, inv);
            }
        }
    }
    std::set<UniMat> out;
    for (const Elt& u : units)
        for (bool c : {false, true}) {
            const UniMat m = oracle_matrix(r, u, c);
            if (m.entry_bound() <= E) out.insert(m);
        }
    return out;
}

inline std::set<UniMat> as_set(const std::vector<UniMat>& v) { return {v.begin(), v.end()}; }

// The least w in V (x-major scan of [-r, r]^2) with M w or M^-1 w outside V.
inline std::optional<Point> oracle_counterexample(const std::string& name, int k, const UniMat& M, i64 r) {
    const Ring ring = ring_of(name);
    const UniMat inv = M.inverse();
    auto in_v = [&](const Point& p) { return is_k_free(ring, {p[0], p[1]}, k); };
    for (i64 x = -r; x <= r; ++x)
        for (i64 y = -r; y <= r; ++y) {
            const Point p = make_point({x, y});
            if (in_v(p) && (!in_v(M.apply(p)) || !in_v(inv.apply(p)))) return p;
        }
    return std::nullopt;
}

// Cosets of (pi^k) met by U, counted with the oracle's divisibility.
inline i64 oracle_cosets(Ring r, Elt pik, const std::vector<Point>& U) {
    std::vector<Elt> reps;
    for (const Point& p : U) {
        bool fresh = true;
        for (const Elt& q : reps) fresh = fresh && !divides(r, pik, {p[0] - q.a, p[1] - q.b});
        if (fresh) reps.push_back({p[0], p[1]});
    }
    return static_cast<i64>(reps.size());
}

inline bool oracle_admissible(const std::string& name, int k, const std::vector<Point>& U) {
    const Ring r = ring_of(name);
    const i64 n = static_cast<i64>(U.size());
    for (i64 p = 2; p <= n; ++p) {
        if (!is_prime(p)) continue;
        for (const Elt& pi : primes_above(r, p)) {
            const Elt pik = power(r, pi, k);
            const i64 index = std::abs(norm(r, pik));
            if (index > n) continue;
            if (oracle_cosets(r, pik, U) == index) return false;
        }
    }
    return true;
}

// Visible points in the plane: U is admissible iff for every prime p it
// misses a class of (Z/p)^2. Only p^2 <= |U| can be hit completely.
inline bool oracle_admissible_visible(const std::vector<Point>& U) {
    const std::set<Point> u(U.begin(), U.end());
    auto mod = [](i64 a, i64 m) { return ((a % m) + m) % m; };
    for (i64 p = 2; p * p <= static_cast<i64>(u.size()); ++p) {
        if (!is_prime(p)) continue;
        std::set<std::pair<i64, i64>> cls;
        for (const Point& x : u) cls.insert({mod(x[0], p), mod(x[1], p)});
        if (static_cast<i64>(cls.size()) == p * p) return false;
    }
    return true;
}

}  // namespace oracle
