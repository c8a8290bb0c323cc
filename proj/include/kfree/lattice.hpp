#pragma once

// Full-rank sublattices of Z^d (d <= 3) in lower-triangular column Hermite
// normal form, coset normal forms, and the Chinese remainder theorem for
// sublattices of pairwise coprime index.
//
// HNF convention: basis columns c_0..c_{d-1} with c_j[i] = 0 for i < j,
// c_i[i] > 0, and 0 <= c_j[i] < c_i[i] for j < i. Reducing a point row by
// row against this basis yields the unique representative in
// [0, c_0[0]) x ... x [0, c_{d-1}[d-1]].

#include <array>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "kfree/checked.hpp"
#include "kfree/errors.hpp"
#include "kfree/integer.hpp"
#include "kfree/ring.hpp"

namespace kfree {

inline constexpr int kMaxDim = 3;

/// Integer point; coordinates beyond the active dimension are kept at 0.
using Point = std::array<i64, kMaxDim>;

/// Square integer matrix, entries m[row][col].
using Mat = std::array<std::array<i64, kMaxDim>, kMaxDim>;

inline Point make_point(std::initializer_list<i64> coords) {
    Point p{};
    std::size_t i = 0;
    for (i64 c : coords) {
        if (i >= p.size()) throw DomainError("too many coordinates");
        p[i++] = c;
    }
    return p;
}

inline Point add(const Point& x, const Point& y, int d) {
    Point r{};
    for (int i = 0; i < d; ++i) r[i] = checked::add(x[i], y[i]);
    return r;
}

inline Point sub(const Point& x, const Point& y, int d) {
    Point r{};
    for (int i = 0; i < d; ++i) r[i] = checked::sub(x[i], y[i]);
    return r;
}

inline Point scale(const Point& x, i64 c, int d) {
    Point r{};
    for (int i = 0; i < d; ++i) r[i] = checked::mul(x[i], c);
    return r;
}

inline Point apply(const Mat& m, const Point& x, int d) {
    Point r{};
    for (int i = 0; i < d; ++i) {
        i128 acc = 0;
        for (int j = 0; j < d; ++j) acc = checked::add128(acc, checked::mul128(m[i][j], x[j]));
        r[i] = checked::narrow(acc);
    }
    return r;
}

inline Point column(const Mat& m, int j, int d) {
    Point c{};
    for (int i = 0; i < d; ++i) c[i] = m[i][j];
    return c;
}

inline std::string point_str(const Point& p, int d) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < d; ++i) os << (i ? "," : "") << p[i];
    os << ")";
    return os.str();
}

/// Coordinates of a ring element as a lattice point (d = degree).
inline Point to_point(const QuadInt& x) { return Point{x.a, x.b, 0}; }

inline QuadInt to_quad(const Point& p, RingId ring) {
    return QuadInt{p[0], ring == RingId::rational ? 0 : p[1], ring};
}

/// Hermite normal form of the lattice generated by the given columns.
inline Mat hermite_normal_form(int d, std::vector<Point> cols) {
    if (d < 1 || d > kMaxDim) throw DomainError("lattice dimension must be 1..3");
    if (static_cast<int>(cols.size()) < d) throw DomainError("too few generators for a full-rank lattice");
    const std::size_t m = cols.size();
    auto combine = [d](const Point& u, i64 x, const Point& v, i64 y) {
        Point r{};
        for (int i = 0; i < d; ++i)
            r[i] = checked::narrow(checked::add128(checked::mul128(u[i], x), checked::mul128(v[i], y)));
        return r;
    };
    for (int i = 0; i < d; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        for (std::size_t j = ii + 1; j < m; ++j) {
            const i64 a = cols[ii][i];
            const i64 b = cols[j][i];
            if (b == 0) continue;
            const Bezout bz = ext_gcd(a, b);
            const Point ci = combine(cols[ii], bz.x, cols[j], bz.y);
            const Point cj = combine(cols[ii], -(b / bz.g), cols[j], a / bz.g);
            cols[ii] = ci;
            cols[j] = cj;
        }
        if (cols[ii][i] == 0) throw DomainError("generators do not span a full-rank lattice");
        if (cols[ii][i] < 0) cols[ii] = scale(cols[ii], -1, d);
        for (std::size_t j = 0; j < ii; ++j) {
            const i64 q = floor_div(cols[j][i], cols[ii][i]);
            if (q != 0) cols[j] = combine(cols[j], 1, cols[ii], -q);
        }
    }
    Mat h{};
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) h[i][j] = cols[static_cast<std::size_t>(j)][i];
    return h;
}

/// Where a modulus lattice came from; used for reporting only.
struct ModulusSource {
    enum class Kind { scalar, ideal, general };
    Kind kind = Kind::general;
    i64 b = 0;        ///< scalar modulus b (lattice b Z^d)
    QuadInt pi{};     ///< ideal (pi^k)
    int k = 0;
};

/// Finite-index sublattice of Z^d in Hermite normal form.
class ModulusLattice {
public:
    ModulusLattice() = default;

    static ModulusLattice from_generators(int d, std::vector<Point> gens, ModulusSource src = {}) {
        ModulusLattice m;
        m.d_ = d;
        m.basis_ = hermite_normal_form(d, std::move(gens));
        i64 idx = 1;
        for (int i = 0; i < d; ++i) idx = checked::mul(idx, m.basis_[i][i]);
        m.index_ = idx;
        m.source_ = src;
        return m;
    }

    /// b Z^d.
    static ModulusLattice scalar(i64 b, int d) {
        if (b < 1) throw DomainError("scalar modulus must be positive");
        std::vector<Point> gens;
        for (int i = 0; i < d; ++i) {
            Point c{};
            c[i] = b;
            gens.push_back(c);
        }
        ModulusSource src;
        src.kind = ModulusSource::Kind::scalar;
        src.b = b;
        return from_generators(d, std::move(gens), src);
    }

    /// The principal ideal (g) in coordinates {1, w}.
    static ModulusLattice principal_ideal(const QuadInt& g) {
        if (g.is_zero()) throw DomainError("zero ideal has infinite index");
        ModulusSource src;
        src.kind = ModulusSource::Kind::ideal;
        src.pi = g;
        src.k = 1;
        if (g.ring == RingId::rational) return from_generators(1, {Point{checked::abs(g.a), 0, 0}}, src);
        return from_generators(2, {to_point(g), to_point(mul(g, QuadInt::omega(g.ring)))}, src);
    }

    /// The ideal (pi^k); index |N(pi)|^k.
    static ModulusLattice ideal_power(const QuadInt& pi, int k) {
        ModulusLattice m = principal_ideal(pow(pi, k));
        m.source_.pi = pi;
        m.source_.k = k;
        return m;
    }

    int dim() const { return d_; }
    const Mat& basis() const { return basis_; }
    i64 index() const { return index_; }
    const ModulusSource& source() const { return source_; }

    /// Unique coset representative of x.
    Point reduce(Point x) const {
        for (int i = 0; i < d_; ++i) {
            const i64 q = floor_div(x[i], basis_[i][i]);
            if (q == 0) continue;
            for (int r = i; r < d_; ++r) x[r] = checked::sub(x[r], checked::mul(q, basis_[r][i]));
        }
        return x;
    }

    bool contains(const Point& x) const { return reduce(x) == Point{}; }

    /// Calls f(rep) for every coset representative in lexicographic order
    /// until f returns false.
    template <typename F>
    void for_each_coset(F&& f) const {
        Point p{};
        for_each_coset_rec(0, p, f);
    }

    /// Image M(L) under a unimodular matrix.
    ModulusLattice transformed(const Mat& m) const {
        std::vector<Point> gens;
        for (int j = 0; j < d_; ++j) gens.push_back(apply(m, column(basis_, j, d_), d_));
        return from_generators(d_, std::move(gens));
    }

    std::string describe() const {
        std::ostringstream os;
        switch (source_.kind) {
            case ModulusSource::Kind::scalar: os << source_.b << "Z^" << d_; break;
            case ModulusSource::Kind::ideal:
                os << "(" << point_str(to_point(source_.pi), ring_degree(source_.pi.ring)) << "^" << source_.k
                   << ")@" << ring_name(source_.pi.ring);
                break;
            case ModulusSource::Kind::general: os << "lattice[index " << index_ << "]"; break;
        }
        return os.str();
    }

    friend bool operator==(const ModulusLattice& x, const ModulusLattice& y) {
        return x.d_ == y.d_ && x.basis_ == y.basis_;
    }

private:
    template <typename F>
    bool for_each_coset_rec(int i, Point& p, F& f) const {
        if (i == d_) return f(static_cast<const Point&>(p));
        for (i64 v = 0; v < basis_[i][i]; ++v) {
            p[i] = v;
            if (!for_each_coset_rec(i + 1, p, f)) return false;
        }
        p[i] = 0;
        return true;
    }

    int d_ = 0;
    Mat basis_{};
    i64 index_ = 0;
    ModulusSource source_{};
};

/// L1 intersected with L2 for coprime indices n1, n2: n2 L1 + n1 L2.
inline ModulusLattice intersect_coprime(const ModulusLattice& l1, const ModulusLattice& l2) {
    if (l1.dim() != l2.dim()) throw DomainError("lattice dimensions differ");
    const int d = l1.dim();
    if (gcd(l1.index(), l2.index()) != 1) throw DomainError("lattice indices are not coprime");
    std::vector<Point> gens;
    for (int j = 0; j < d; ++j) gens.push_back(scale(column(l1.basis(), j, d), l2.index(), d));
    for (int j = 0; j < d; ++j) gens.push_back(scale(column(l2.basis(), j, d), l1.index(), d));
    ModulusLattice r = ModulusLattice::from_generators(d, std::move(gens));
    if (r.index() != checked::mul(l1.index(), l2.index())) throw ArithmeticError("intersection index mismatch");
    return r;
}

/// Lagrange-Gauss reduced basis of a planar lattice, as columns.
inline Mat reduced_basis(const ModulusLattice& l) {
    if (l.dim() != 2) throw DomainError("basis reduction is implemented for d = 2");
    auto dot = [](const Point& x, const Point& y) {
        return checked::add128(checked::mul128(x[0], y[0]), checked::mul128(x[1], y[1]));
    };
    Point u = column(l.basis(), 0, 2), v = column(l.basis(), 1, 2);
    if (dot(u, u) > dot(v, v)) std::swap(u, v);
    for (;;) {
        const i64 q = round_div(dot(u, v), dot(u, u));
        v = sub(v, scale(u, q, 2), 2);
        if (dot(v, v) >= dot(u, u)) break;
        std::swap(u, v);
    }
    Mat m{};
    m[0][0] = u[0];
    m[1][0] = u[1];
    m[0][1] = v[0];
    m[1][1] = v[1];
    return m;
}

/// A short representative of x + L for planar L with basis b (Babai rounding).
inline Point short_representative(const Point& x, const Mat& b) {
    const i128 det = checked::sub128(checked::mul128(b[0][0], b[1][1]), checked::mul128(b[0][1], b[1][0]));
    const i128 c0 = checked::sub128(checked::mul128(b[1][1], x[0]), checked::mul128(b[0][1], x[1]));
    const i128 c1 = checked::sub128(checked::mul128(b[0][0], x[1]), checked::mul128(b[1][0], x[0]));
    const Point j{round_div(c0, det), round_div(c1, det), 0};
    return sub(x, apply(b, j, 2), 2);
}

struct Congruence {
    Point residue;
    ModulusLattice modulus;
};

struct CrtSolution {
    Point t0;                 ///< least nonnegative (normal-form) representative
    ModulusLattice lattice;   ///< all solutions are t0 + lattice
};

/// Solve t = r_i mod L_i for lattices with pairwise coprime indices.
inline CrtSolution crt_solve(std::span<const Congruence> system) {
    if (system.empty()) throw DomainError("crt_solve needs at least one congruence");
    const int d = system.front().modulus.dim();
    for (std::size_t i = 0; i < system.size(); ++i) {
        if (system[i].modulus.dim() != d) throw DomainError("congruences of mixed dimension");
        for (std::size_t j = i + 1; j < system.size(); ++j) {
            if (gcd(system[i].modulus.index(), system[j].modulus.index()) != 1)
                throw DomainError("crt_solve: moduli " + system[i].modulus.describe() + " and " +
                                  system[j].modulus.describe() + " have non-coprime indices");
        }
    }
    Point t = system.front().modulus.reduce(system.front().residue);
    ModulusLattice lat = system.front().modulus;
    for (std::size_t i = 1; i < system.size(); ++i) {
        const ModulusLattice& l2 = system[i].modulus;
        const i64 n1 = lat.index();
        const i64 n2 = l2.index();
        const i64 u = inverse_mod(n1 % n2, n2);
        const Point diff = sub(system[i].residue, t, d);
        Point s{};
        for (int c = 0; c < d; ++c) s[c] = mul_mod(u, diff[c], n2);
        t = add(t, scale(s, n1, d), d);
        lat = intersect_coprime(lat, l2);
        t = lat.reduce(t);
    }
    for (const Congruence& c : system) {
        if (!c.modulus.contains(sub(t, c.residue, d))) throw ArithmeticError("CRT solution failed verification");
    }
    return {t, lat};
}

}  // namespace kfree
