#pragma once

// Coset occupancy, admissibility, and locators t with t + P inside V and
// t + Q outside V.
//
// A finite set U is admissible for V when it misses at least one coset of
// every modulus lattice in the family defining V (b Z^d for B-free
// lattice sets, the ideals (pi^k) for k-free ring sets). Moduli of index
// larger than |U| are missed by cardinality alone, so only finitely many
// need to be checked.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kfree/arithmetic.hpp"
#include "kfree/errors.hpp"
#include "kfree/integer.hpp"
#include "kfree/lattice.hpp"
#include "kfree/point_set.hpp"

namespace kfree {

/// One modulus of the family defining V.
struct FamilyModulus {
    ModulusLattice lattice;
    i64 scale;           ///< b for scalar moduli, index for ideal moduli
    i64 rational_prime;  ///< rational prime below an ideal modulus, 0 otherwise
};

namespace detail {

/// base^e if it is <= limit, otherwise nullopt.
inline std::optional<i64> bounded_pow(i64 base, int e, i64 limit) {
    i128 v = 1;
    for (int i = 0; i < e; ++i) {
        v *= base;
        if (v > limit) return std::nullopt;
    }
    return static_cast<i64>(v);
}

inline i64 integer_root_floor(i64 n, int e) {
    if (n < 1) return 0;
    i64 r = static_cast<i64>(std::pow(static_cast<double>(n), 1.0 / e));
    while (r > 0 && !bounded_pow(r, e, n)) --r;
    while (bounded_pow(r + 1, e, n)) ++r;
    return r;
}

}  // namespace detail

/// Moduli of the family with index <= max_index, ordered by index.
inline std::vector<FamilyModulus> family_moduli(const VSpec& spec, i64 max_index) {
    std::vector<FamilyModulus> out;
    if (max_index < 2) return out;
    const int d = spec.d;
    switch (spec.kind) {
        case SetKind::visible:
        case SetKind::kfree_lattice: {
            const int e = spec.kind == SetKind::visible ? 1 : spec.k;
            for (i64 p : primes_up_to(detail::integer_root_floor(max_index, e * d))) {
                const i64 b = *detail::bounded_pow(p, e, max_index);
                out.push_back({ModulusLattice::scalar(b, d), b, 0});
            }
            break;
        }
        case SetKind::bfree_lattice:
            for (i64 b : spec.B) {
                if (detail::bounded_pow(b, d, max_index)) out.push_back({ModulusLattice::scalar(b, d), b, 0});
            }
            break;
        case SetKind::kfree_ring: {
            const RingSpec ring = make_ring(spec.ring);
            for (const RingPrime& rp : primes_up_to_norm(ring, detail::integer_root_floor(max_index, spec.k))) {
                ModulusLattice m = ModulusLattice::ideal_power(rp.pi, spec.k);
                out.push_back({m, m.index(), rp.p});
            }
            break;
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FamilyModulus& x, const FamilyModulus& y) { return x.lattice.index() < y.lattice.index(); });
    return out;
}

/// How many cosets of a modulus a finite set meets.
struct CosetProfile {
    ModulusLattice modulus;
    i64 met = 0;
    std::optional<Point> missed_example;  ///< lexicographically least missed representative
};

inline CosetProfile cosets_met(std::span<const Point> U, const ModulusLattice& m) {
    if (U.size() > 1'000'000) throw ResourceError("cosets_met: set larger than 10^6 points");
    std::vector<Point> reps;
    reps.reserve(U.size());
    for (const Point& u : U) reps.push_back(m.reduce(u));
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    CosetProfile prof{m, static_cast<i64>(reps.size()), std::nullopt};
    if (prof.met < m.index()) {
        m.for_each_coset([&](const Point& c) {
            if (std::binary_search(reps.begin(), reps.end(), c)) return true;
            prof.missed_example = c;
            return false;
        });
    }
    return prof;
}

struct AdmissibilityResult {
    bool admissible = true;
    std::vector<CosetProfile> certificates;  ///< every modulus checked, in order
    std::optional<CosetProfile> violator;     ///< a modulus whose cosets are all met
};

namespace detail {
inline std::vector<Point> as_set(std::span<const Point> U) {
    std::vector<Point> s(U.begin(), U.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}
}  // namespace detail

/// Admissibility against an explicit list of moduli.
inline AdmissibilityResult check_moduli(std::span<const Point> U, std::span<const FamilyModulus> moduli) {
    AdmissibilityResult res;
    for (const FamilyModulus& fm : moduli) {
        CosetProfile prof = cosets_met(U, fm.lattice);
        const bool all_met = !prof.missed_example.has_value();
        res.certificates.push_back(prof);
        if (all_met) {
            res.admissible = false;
            res.violator = prof;
            break;
        }
    }
    return res;
}

/// Admissibility of U for the family of spec; only moduli of index <= |U|
/// are checked.
inline AdmissibilityResult is_admissible(std::span<const Point> U, const VSpec& spec) {
    const std::vector<Point> set = detail::as_set(U);
    const auto moduli = family_moduli(spec, static_cast<i64>(set.size()));
    return check_moduli(set, moduli);
}

enum class LocatorMode { scan, crt };
enum class LocatorStatus { found, impossible, not_found };

inline std::string_view status_name(LocatorStatus s) {
    switch (s) {
        case LocatorStatus::found: return "found";
        case LocatorStatus::impossible: return "impossible";
        case LocatorStatus::not_found: return "not_found";
    }
    return "?";
}

struct LocatorQuery {
    std::vector<Point> P;
    std::vector<Point> Q;
    VSpec spec;
    LocatorMode mode = LocatorMode::scan;
    /// Sup-norm of t (scan) or of the coset coordinate j (crt; planar cosets
    /// are scanned in a reduced basis around a short representative).
    i64 radius = 500;
};

struct LocatorResult {
    LocatorStatus status = LocatorStatus::not_found;
    std::optional<Point> t;
    std::optional<CosetProfile> violator;    ///< set when impossible
    std::vector<Congruence> congruences;     ///< crt mode: the system that was solved
    std::optional<CrtSolution> solution;     ///< crt mode
};

/// Integers of [-s, s] in the order 0, 1, -1, 2, -2, ..., s, -s.
inline std::vector<i64> zigzag_values(i64 s) {
    std::vector<i64> v{0};
    for (i64 i = 1; i <= s; ++i) {
        v.push_back(i);
        v.push_back(-i);
    }
    return v;
}

/// Calls f(p) for every point of sup-norm exactly s, in lexicographic order
/// with respect to the zigzag order of integers, until f returns false.
/// Returns false if stopped early.
template <typename F>
bool for_each_shell_point(int d, i64 s, F&& f) {
    const std::vector<i64> values = zigzag_values(s);
    Point p{};
    auto rec = [&](auto&& self, int i, bool hit) -> bool {
        if (i == d) return hit ? f(static_cast<const Point&>(p)) : true;
        for (i64 v : values) {
            const bool at_edge = v == s || v == -s;
            if (i == d - 1 && !hit && !at_edge) continue;
            p[i] = v;
            if (!self(self, i + 1, hit || at_edge)) return false;
        }
        p[i] = 0;
        return true;
    };
    return rec(rec, 0, false);
}

namespace detail {

inline i64 sup_extent(std::span<const Point> pts, int d) {
    i64 e = 0;
    for (const Point& p : pts)
        for (int i = 0; i < d; ++i) e = std::max(e, checked::abs(p[i]));
    return e;
}

/// Direct re-verification with the point oracle.
inline bool locates(const VSpec& spec, const Point& t, std::span<const Point> P, std::span<const Point> Q) {
    for (const Point& p : P)
        if (!contains_point(spec, add(t, p, spec.d))) return false;
    for (const Point& q : Q)
        if (contains_point(spec, add(t, q, spec.d))) return false;
    return true;
}

inline void check_disjoint(const LocatorQuery& q) {
    for (const Point& p : q.P)
        if (std::find(q.Q.begin(), q.Q.end(), p) != q.Q.end())
            throw DomainError("locator query: P and Q must be disjoint");
}

inline LocatorResult locate_by_scan(const LocatorQuery& q) {
    const int d = q.spec.d;
    const i64 extent = std::max(sup_extent(q.P, d), sup_extent(q.Q, d));
    const Window w = sieve_window(q.spec, Box{d, q.radius + extent});
    LocatorResult res;
    for (i64 s = 0; s <= q.radius; ++s) {
        const bool finished = !for_each_shell_point(d, s, [&](const Point& t) {
            for (const Point& p : q.P)
                if (!w.contains(add(t, p, d))) return true;
            for (const Point& x : q.Q)
                if (w.contains(add(t, x, d))) return true;
            res.t = t;
            return false;
        });
        if (finished) break;
    }
    if (res.t) {
        if (!locates(q.spec, *res.t, q.P, q.Q)) throw ArithmeticError("locator failed re-verification");
        res.status = LocatorStatus::found;
    }
    return res;
}

/// Moduli whose cosets cannot all be kept free by P: index <= |P| or two
/// points of P collide modulo it.
inline std::vector<FamilyModulus> crt_critical_moduli(const VSpec& spec, std::span<const Point> P) {
    const int d = spec.d;
    const i64 m = static_cast<i64>(P.size());
    std::vector<FamilyModulus> cands = family_moduli(spec, m);
    // collisions: moduli containing some difference p_i - p_j
    i64 diff_bound = 1;
    for (std::size_t i = 0; i < P.size(); ++i) {
        for (std::size_t j = i + 1; j < P.size(); ++j) {
            const Point diff = sub(P[i], P[j], d);
            if (spec.is_ring()) diff_bound = std::max(diff_bound, abs_norm(to_quad(diff, spec.ring)));
            else diff_bound = std::max(diff_bound, checked::abs(coordinate_gcd(diff, d)));
        }
    }
    if (diff_bound > 1) {
        // an index-N modulus containing a nonzero difference of norm/gcd D has N | D^d
        // (scalar: b | gcd) or N | |N(diff)| (ideal); so index <= D^d suffices
        const i64 bound = spec.is_ring() ? diff_bound : *detail::bounded_pow(diff_bound, d, std::numeric_limits<i64>::max());
        for (FamilyModulus& fm : family_moduli(spec, bound)) cands.push_back(std::move(fm));
    }
    std::vector<FamilyModulus> out;
    for (FamilyModulus& fm : cands) {
        bool dup = false;
        for (const FamilyModulus& o : out) dup = dup || o.lattice == fm.lattice;
        if (dup) continue;
        const i64 met = cosets_met(P, fm.lattice).met;
        if (fm.lattice.index() <= m || met < m) out.push_back(std::move(fm));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FamilyModulus& x, const FamilyModulus& y) { return x.lattice.index() < y.lattice.index(); });
    return out;
}

inline Point negate(const Point& p, int d) { return scale(p, -1, d); }

inline LocatorResult locate_by_crt(const LocatorQuery& q) {
    const VSpec& spec = q.spec;
    const int d = spec.d;
    if (!spec.is_erdos()) throw DomainError("CRT-guided locator needs an Erdos family (pairwise coprime moduli)");
    LocatorResult res;

    // S1 with p_b = least missed coset of P
    struct Constraint {
        FamilyModulus fm;
        Point residue;
    };
    std::vector<Constraint> constraints;
    for (FamilyModulus& fm : crt_critical_moduli(spec, q.P)) {
        const CosetProfile prof = cosets_met(q.P, fm.lattice);
        constraints.push_back({fm, fm.lattice.reduce(negate(*prof.missed_example, d))});
    }
    // S2: one fresh modulus per q, smallest index first, with q in a coset missed by P
    auto used = [&](const FamilyModulus& fm) {
        for (const Constraint& c : constraints) {
            if (c.fm.lattice == fm.lattice) return true;
            if (spec.is_ring() && c.fm.rational_prime == fm.rational_prime) return true;
        }
        return false;
    };
    for (const Point& x : q.Q) {
        std::optional<FamilyModulus> chosen;
        for (i64 bound = 4; !chosen; bound *= 2) {
            if (bound > (i64{1} << 40)) break;
            const auto fam = family_moduli(spec, bound);
            for (const FamilyModulus& fm : fam) {
                if (used(fm)) continue;
                const Point rq = fm.lattice.reduce(x);
                const bool hit = std::any_of(q.P.begin(), q.P.end(), [&](const Point& p) { return fm.lattice.reduce(p) == rq; });
                if (hit) continue;
                chosen = fm;
                break;
            }
            if (spec.kind == SetKind::bfree_lattice && !chosen && bound > 4 * spec.B.back()) break;
        }
        if (!chosen) return res;  // finite family exhausted
        constraints.push_back({*chosen, chosen->lattice.reduce(negate(x, d))});
    }
    if (constraints.empty()) {
        constraints.push_back({FamilyModulus{ModulusLattice::scalar(1, d), 1, 0}, Point{}});
    }

    // Split pairs share a rational prime: merge them by searching the cosets
    // of their intersection (p^k) for the common solution.
    std::vector<Congruence> system;
    std::map<i64, std::vector<Constraint>> by_prime;
    for (const Constraint& c : constraints) {
        if (spec.is_ring()) by_prime[c.fm.rational_prime].push_back(c);
        else system.push_back({c.residue, c.fm.lattice});
    }
    for (auto& [p, group] : by_prime) {
        if (group.size() == 1) {
            system.push_back({group[0].residue, group[0].fm.lattice});
            continue;
        }
        const ModulusLattice joint = ModulusLattice::principal_ideal(scale(QuadInt::one(spec.ring), ipow(p, spec.k)));
        std::optional<Point> r;
        joint.for_each_coset([&](const Point& c) {
            for (const Constraint& g : group)
                if (g.fm.lattice.reduce(c) != g.residue) return true;
            r = c;
            return false;
        });
        if (!r) throw ArithmeticError("no joint residue for a split prime pair");
        system.push_back({*r, joint});
    }
    res.congruences = system;
    res.solution = crt_solve(system);
    const CrtSolution& sol = *res.solution;
    // planar solution cosets are scanned around a short representative
    const Mat basis = d == 2 ? reduced_basis(sol.lattice) : sol.lattice.basis();
    const Point start = d == 2 ? short_representative(sol.t0, basis) : sol.t0;
    for (i64 s = 0; s <= q.radius && !res.t; ++s) {
        for_each_shell_point(d, s, [&](const Point& j) {
            const Point t = add(start, apply(basis, j, d), d);
            if (!locates(spec, t, q.P, q.Q)) return true;
            res.t = t;
            return false;
        });
    }
    if (res.t) res.status = LocatorStatus::found;
    return res;
}

}  // namespace detail

/// First locator in scan order, or a proof of impossibility when P is not
/// admissible. Exhausting the radius yields not_found.
inline LocatorResult find_locator(const LocatorQuery& q) {
    q.spec.validate();
    detail::check_disjoint(q);
    const AdmissibilityResult adm = is_admissible(q.P, q.spec);
    if (!adm.admissible) {
        LocatorResult res;
        res.status = LocatorStatus::impossible;
        res.violator = adm.violator;
        return res;
    }
    return q.mode == LocatorMode::scan ? detail::locate_by_scan(q) : detail::locate_by_crt(q);
}

/// Truncated density product c^{-d} prod_{b in R_n} (1 - |P| / index(b)),
/// a lower-bound shape for dens L(P, {}). R_n collects the moduli outside S1
/// with b <= n (scalar families) or absolute norm <= n (ideal families).
inline double locator_density_bound(std::span<const Point> P_in, const VSpec& spec, i64 n) {
    spec.validate();
    if (!spec.is_erdos()) throw DomainError("density bound needs an Erdos family");
    const std::vector<Point> P = detail::as_set(P_in);
    if (!is_admissible(P, spec).admissible) throw DomainError("density bound needs an admissible P");
    const std::vector<FamilyModulus> s1 = detail::crt_critical_moduli(spec, P);
    double bound = 1.0;
    for (const FamilyModulus& fm : s1) bound /= static_cast<double>(fm.lattice.index());
    const i64 max_index = spec.is_ring() ? n : detail::bounded_pow(n, spec.d, std::numeric_limits<i64>::max()).value_or(0);
    const double m = static_cast<double>(P.size());
    for (const FamilyModulus& fm : family_moduli(spec, max_index)) {
        const bool in_s1 = std::any_of(s1.begin(), s1.end(), [&](const FamilyModulus& o) { return o.lattice == fm.lattice; });
        if (in_s1) continue;
        bound *= 1.0 - m / static_cast<double>(fm.lattice.index());
    }
    return bound;
}

}  // namespace kfree
