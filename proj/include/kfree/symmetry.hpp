#pragma once

// GL(2, Z) candidates acting on point sets, patch-level stabiliser tests,
// comparison with the groups generated by units and conjugation, and the
// constructive witness that a non-stabilising matrix maps some admissible
// set to an inadmissible one.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kfree/admissibility.hpp"
#include "kfree/arithmetic.hpp"
#include "kfree/errors.hpp"
#include "kfree/lattice.hpp"
#include "kfree/point_set.hpp"
#include "kfree/ring.hpp"

namespace kfree {

inline constexpr i64 kMaxEntryBound = 6;

/// 2x2 integer matrix [[a, b], [c, d]] with determinant +-1.
struct UniMat {
    i64 a = 1, b = 0, c = 0, d = 1;

    i64 det() const { return checked::sub(checked::mul(a, d), checked::mul(b, c)); }
    i64 entry_bound() const { return std::max({checked::abs(a), checked::abs(b), checked::abs(c), checked::abs(d)}); }

    static UniMat identity() { return {}; }

    /// Validated construction.
    static UniMat of(i64 a, i64 b, i64 c, i64 d) {
        UniMat m{a, b, c, d};
        const i64 det = m.det();
        if (det != 1 && det != -1) throw DomainError("matrix is not unimodular (det " + std::to_string(det) + ")");
        return m;
    }

    UniMat inverse() const {
        const i64 e = det();
        return {e * d, -e * b, -e * c, e * a};
    }

    Point apply(const Point& p) const {
        return Point{checked::add(checked::mul(a, p[0]), checked::mul(b, p[1])),
                     checked::add(checked::mul(c, p[0]), checked::mul(d, p[1])), 0};
    }

    Mat as_mat() const {
        Mat m{};
        m[0][0] = a;
        m[0][1] = b;
        m[1][0] = c;
        m[1][1] = d;
        return m;
    }

    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," + std::to_string(d) + "]]";
    }

    friend auto operator<=>(const UniMat&, const UniMat&) = default;
};

inline UniMat operator*(const UniMat& x, const UniMat& y) {
    auto dot = [](i64 p, i64 q, i64 r, i64 s) { return checked::add(checked::mul(p, q), checked::mul(r, s)); };
    return {dot(x.a, y.a, x.b, y.c), dot(x.a, y.b, x.b, y.d), dot(x.c, y.a, x.d, y.c), dot(x.c, y.b, x.d, y.d)};
}

/// All 2x2 matrices with |entries| <= E and determinant +-1, in
/// lexicographic order of (a, b, c, d).
inline std::vector<UniMat> enumerate_glz(int d, i64 E) {
    if (d != 2) throw DomainError("enumerate_glz supports d = 2 only");
    if (E < 1) throw DomainError("entry bound must be at least 1");
    if (E > kMaxEntryBound) throw ResourceError("entry bound above 6");
    std::vector<UniMat> out;
    for (i64 a = -E; a <= E; ++a)
        for (i64 b = -E; b <= E; ++b)
            for (i64 c = -E; c <= E; ++c)
                for (i64 e = -E; e <= E; ++e) {
                    const i64 det = a * e - b * c;
                    if (det == 1 || det == -1) out.push_back({a, b, c, e});
                }
    return out;
}

/// Matrix of multiplication by x in the basis {1, w}.
inline UniMat multiplication_matrix(const QuadInt& x) {
    const auto [s, n] = omega_poly(x.ring);
    // x * w = -n b + (a + s b) w
    return {x.a, checked::neg(checked::mul(n, x.b)), x.b, checked::add(x.a, checked::mul(s, x.b))};
}

/// Matrix of the Galois conjugation in the basis {1, w}.
inline UniMat conjugation_matrix(RingId ring) {
    const auto [s, n] = omega_poly(ring);
    (void)n;
    return {1, s, 0, -1};
}

/// Generators of the predicted stabiliser: unit multiplications, the
/// conjugation and -I for rings; standard GL(2, Z) generators otherwise.
inline std::vector<UniMat> expected_generators(const VSpec& spec) {
    if (spec.d != 2) throw DomainError("expected generators are defined for d = 2");
    if (!spec.is_ring()) return {UniMat{0, -1, 1, 0}, UniMat{1, 1, 0, 1}, UniMat{1, 0, 0, -1}};
    const RingSpec ring = make_ring(spec.ring);
    if (!ring.fundamental_unit) {
        // a generator of the torsion units: i for gauss, -rho for eisenstein
        const QuadInt gen = spec.ring == RingId::gauss ? QuadInt{0, 1, ring.id} : QuadInt{0, -1, ring.id};
        return {multiplication_matrix(gen), conjugation_matrix(ring.id)};
    }
    return {multiplication_matrix(*ring.fundamental_unit), conjugation_matrix(ring.id), UniMat{-1, 0, 0, -1}};
}

/// Elements of the group generated by gens with |entries| <= E. Words are
/// explored through intermediates with entries up to 64 E.
inline std::vector<UniMat> bounded_closure(const std::vector<UniMat>& gens, i64 E) {
    const i64 cap = 64 * E;
    std::vector<UniMat> all_gens = gens;
    for (const UniMat& g : gens) all_gens.push_back(g.inverse());
    std::set<UniMat> seen{UniMat::identity()};
    std::vector<UniMat> frontier{UniMat::identity()};
    while (!frontier.empty()) {
        std::vector<UniMat> next;
        for (const UniMat& m : frontier) {
            for (const UniMat& g : all_gens) {
                const UniMat p = m * g;
                if (p.entry_bound() > cap || seen.count(p)) continue;
                seen.insert(p);
                next.push_back(p);
            }
        }
        frontier = std::move(next);
    }
    std::vector<UniMat> out;
    for (const UniMat& m : seen)
        if (m.entry_bound() <= E) out.push_back(m);
    return out;
}

/// The predicted stabiliser slice for entry bound E.
inline std::vector<UniMat> predicted_stabiliser(const VSpec& spec, i64 E) {
    if (!spec.is_ring()) return enumerate_glz(2, E);
    return bounded_closure(expected_generators(spec), E);
}

/// Sieve radius that makes every image of [-r, r]^2 under a matrix with
/// entries <= E decidable.
inline i64 required_radius(i64 r, i64 E) { return checked::mul(r, checked::add(1, checked::mul(2, E))); }

struct StabVerdict {
    bool pass = true;
    std::optional<Point> counterexample;  ///< least w in V with M w or M^-1 w outside V
};

/// Does M map V into itself in both directions on V inside [-r, r]^2?
inline StabVerdict stab_test(const UniMat& M, const Window& w, i64 r) {
    if (w.box().d != 2) throw DomainError("stab_test needs a planar set");
    if (r < 1) throw DomainError("test radius must be at least 1");
    const i64 need = required_radius(r, M.entry_bound());
    if (w.box().R < need)
        throw PreconditionError("sieve radius " + std::to_string(w.box().R) + " below required " + std::to_string(need));
    const UniMat inv = M.inverse();
    for (i64 x = -r; x <= r; ++x) {
        for (i64 y = -r; y <= r; ++y) {
            const Point p{x, y, 0};
            if (!w.contains(p)) continue;
            if (!w.contains(M.apply(p)) || !w.contains(inv.apply(p))) return {false, p};
        }
    }
    return {};
}

enum class GroupMatch { exact, superset, deficit };

inline std::string_view match_name(GroupMatch m) {
    switch (m) {
        case GroupMatch::exact: return "exact";
        case GroupMatch::superset: return "superset";
        case GroupMatch::deficit: return "deficit";
    }
    return "?";
}

struct StabReport {
    VSpec spec;
    i64 entry_bound = 0;
    i64 radius = 0;
    std::vector<UniMat> tested;
    std::vector<UniMat> passed;
    std::map<UniMat, Point> counterexamples;
    std::vector<UniMat> generators;
    std::vector<UniMat> predicted;
    GroupMatch match = GroupMatch::exact;
};

inline StabReport stab_search(const VSpec& spec, i64 E, i64 r, unsigned threads = 1) {
    spec.validate();
    if (spec.d != 2) throw DomainError("stab_search needs a planar set");
    StabReport rep;
    rep.spec = spec;
    rep.entry_bound = E;
    rep.radius = r;
    rep.tested = enumerate_glz(2, E);
    const Window w = sieve_window(spec, Box{2, required_radius(r, E)}, threads);
    std::vector<StabVerdict> verdicts(rep.tested.size());
    detail::for_slabs(static_cast<i64>(rep.tested.size()), threads, [&](i64 lo, i64 hi) {
        for (i64 i = lo; i < hi; ++i) verdicts[static_cast<std::size_t>(i)] = stab_test(rep.tested[static_cast<std::size_t>(i)], w, r);
    });
    for (std::size_t i = 0; i < rep.tested.size(); ++i) {
        if (verdicts[i].pass) rep.passed.push_back(rep.tested[i]);
        else rep.counterexamples.emplace(rep.tested[i], *verdicts[i].counterexample);
    }
    rep.generators = expected_generators(spec);
    rep.predicted = predicted_stabiliser(spec, E);
    const bool covers = std::includes(rep.passed.begin(), rep.passed.end(), rep.predicted.begin(), rep.predicted.end());
    if (!covers) rep.match = GroupMatch::deficit;
    else if (rep.passed.size() > rep.predicted.size()) rep.match = GroupMatch::superset;
    return rep;
}

/// Every product and inverse of passed matrices that stays within the
/// entry bound is itself passed.
inline bool is_bounded_group(const std::vector<UniMat>& passed, i64 E) {
    const std::set<UniMat> s(passed.begin(), passed.end());
    for (const UniMat& m : passed) {
        if (!s.count(m.inverse())) return false;
        for (const UniMat& n : passed) {
            const UniMat p = m * n;
            if (p.entry_bound() <= E && !s.count(p)) return false;
        }
    }
    return true;
}

/// A prime rho and w in V with rho^k | A(w).
struct BadPrime {
    QuadInt rho;
    PrimeTag tag;
    Point w;
    QuadInt image;  ///< A(w)
};

namespace detail {

inline VSpec planar_ring_spec(RingId ring, int k) {
    if (ring_degree(ring) != 2) throw DomainError("witnesses need a quadratic ring");
    return VSpec::kfree_ring(ring, k);
}

inline void require_non_stabiliser(const UniMat& A, const VSpec& spec) {
    constexpr i64 r = 16;
    const Window w = sieve_window(spec, Box{2, required_radius(r, A.entry_bound())});
    if (stab_test(A, w, r).pass)
        throw PreconditionError("matrix " + A.str() + " stabilises the set on the tested window");
}

}  // namespace detail

inline constexpr i64 kBadPrimeShells = 2000;

/// First w of V in expanding shells whose image is divisible by a k-th prime power.
inline BadPrime bad_prime_witness(const UniMat& A, RingId ring, int k) {
    const VSpec spec = detail::planar_ring_spec(ring, k);
    detail::require_non_stabiliser(A, spec);
    std::optional<BadPrime> found;
    for (i64 s = 1; s <= kBadPrimeShells && !found; ++s) {
        for_each_shell_point(2, s, [&](const Point& w) {
            if (!contains_point(spec, w)) return true;
            const QuadInt image = to_quad(A.apply(w), ring);
            for (const auto& [pi, e] : factor(image).factors) {
                if (e < k) continue;
                found = BadPrime{pi, prime_tag(pi), w, image};
                return false;
            }
            return true;
        });
    }
    if (!found) throw ResourceError("no bad prime found within " + std::to_string(kBadPrimeShells) + " shells");
    if (found->tag == PrimeTag::Inert) throw ArithmeticError("bad prime is inert, contradicting unimodularity of A");
    if (found->tag == PrimeTag::Ramified && k % 2 == 0)
        throw ArithmeticError("bad prime is ramified with even k, contradicting unimodularity of A");
    return *found;
}

struct Witness {
    UniMat A;
    RingId ring = RingId::gauss;
    int k = 2;
    BadPrime bad;
    std::vector<QuadInt> P;        ///< auxiliary primes
    ModulusLattice L;              ///< the ideal (prod pi^k)
    std::vector<Point> S;          ///< S[0] = w
    std::vector<std::string> repairs;
    AdmissibilityResult S_check;   ///< independent verdict on S
    AdmissibilityResult AS_check;  ///< independent verdict on A(S)
    int attempt = 0;
};

inline constexpr int kWitnessAttempts = 64;

/// S admissible with A(S) meeting every coset of (rho^k).
inline Witness inadmissible_image_witness(const UniMat& A, RingId ring, int k) {
    const VSpec spec = detail::planar_ring_spec(ring, k);
    const RingSpec rs = make_ring(ring);
    Witness wit;
    wit.A = A;
    wit.ring = ring;
    wit.k = k;
    wit.bad = bad_prime_witness(A, ring, k);
    const QuadInt rho = wit.bad.rho;
    const i64 rho_norm = abs_norm(rho);
    const Point w = wit.bad.w;

    for (const RingPrime& rp : primes_up_to_norm(rs, rho_norm - 1)) wit.P.push_back(rp.pi);
    if (wit.P.empty()) {
        for (i64 p = 2;; ++p) {
            if (!is_prime(p)) continue;
            const PrimeClass pc = classify_prime(rs, p);
            if (pc.tag == PrimeTag::Inert) {
                wit.P.push_back(pc.generators[0]);
                break;
            }
        }
    }
    QuadInt prod = QuadInt::one(ring);
    for (const QuadInt& pi : wit.P) prod = mul(prod, pow(pi, k));
    wit.L = ModulusLattice::principal_ideal(prod);

    const ModulusLattice rho_k = ModulusLattice::ideal_power(rho, k);
    const ModulusLattice pre_rho_k = rho_k.transformed(A.inverse().as_mat());
    const i64 n = rho_k.index();
    const Point one{1, 0, 0};

    // solutions z of z = 1 mod L, A z = c mod rho^k, one class per nonzero coset c
    std::vector<CrtSolution> classes;
    rho_k.for_each_coset([&](const Point& c) {
        if (c == Point{}) return true;
        const std::vector<Congruence> sys{{one, wit.L}, {A.inverse().apply(c), pre_rho_k}};
        classes.push_back(crt_solve(sys));
        return true;
    });

    std::vector<Point> offsets;
    for (i64 s = 0; static_cast<int>(offsets.size()) < kWitnessAttempts; ++s)
        for_each_shell_point(2, s, [&](const Point& j) {
            offsets.push_back(j);
            return true;
        });

    const std::optional<QuadInt> rho_bar =
        wit.bad.tag == PrimeTag::Split ? std::optional<QuadInt>(canonical_associate(conj(rho)).rep) : std::nullopt;

    for (int attempt = 0; attempt < kWitnessAttempts; ++attempt) {
        const Point& j = offsets[static_cast<std::size_t>(attempt)];
        std::vector<Point> S{w};
        for (const CrtSolution& cls : classes) S.push_back(add(cls.t0, apply(cls.lattice.basis(), j, 2), 2));
        std::vector<std::string> repairs;

        if (cosets_met(S, rho_k).met == n) {
            S[1] = add(S[1], w, 2);
            repairs.push_back("z2 -> z2 + w");
        }
        bool repaired = true;
        if (rho_bar) {
            const ModulusLattice bar_k = ModulusLattice::ideal_power(*rho_bar, k);
            if (cosets_met(S, bar_k).met == bar_k.index()) {
                repaired = false;
                const Point twin = rho_k.reduce(S[1]);
                for (std::size_t i = 2; i < S.size() && !repaired; ++i) {
                    if (rho_k.reduce(S[i]) == twin) continue;
                    std::vector<Point> trial = S;
                    trial[i] = add(trial[i], w, 2);
                    if (cosets_met(trial, bar_k).met < bar_k.index()) {
                        S = trial;
                        repairs.push_back("z" + std::to_string(i + 1) + " -> z" + std::to_string(i + 1) + " + w");
                        repaired = true;
                    }
                }
            }
        }
        if (!repaired) continue;

        std::vector<Point> AS;
        for (const Point& z : S) AS.push_back(A.apply(z));
        AdmissibilityResult s_check = is_admissible(S, spec);
        AdmissibilityResult as_check = is_admissible(AS, spec);
        if (detail::as_set(S).size() != static_cast<std::size_t>(n)) continue;
        if (s_check.admissible && !as_check.admissible) {
            wit.S = std::move(S);
            wit.repairs = std::move(repairs);
            wit.S_check = std::move(s_check);
            wit.AS_check = std::move(as_check);
            wit.attempt = attempt;
            return wit;
        }
    }
    throw ResourceError("witness construction exhausted " + std::to_string(kWitnessAttempts) +
                        " placements for rho = " + point_str(to_point(rho), 2) + ", w = " + point_str(w, 2));
}

}  // namespace kfree
