#pragma once

// Point sets V in a finite box: visible points, k-free and B-free lattice
// points, and k-free integers of the quadratic rings, together with an
// exact membership window and empirical densities.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "kfree/arithmetic.hpp"
#include "kfree/checked.hpp"
#include "kfree/errors.hpp"
#include "kfree/integer.hpp"
#include "kfree/lattice.hpp"
#include "kfree/ring.hpp"

namespace kfree {

inline constexpr i64 kMaxBoxPoints = 100'000'000;

/// The integer points of [-R, R]^d.
struct Box {
    int d = 2;
    i64 R = 1;

    i64 side() const { return 2 * R + 1; }

    i64 size() const {
        i64 n = 1;
        for (int i = 0; i < d; ++i) {
            if (n > kMaxBoxPoints / side()) throw ResourceError("box exceeds 10^8 points");
            n *= side();
        }
        return n;
    }

    void validate() const {
        if (d < 1 || d > kMaxDim) throw DomainError("box dimension must be 1, 2 or 3");
        if (R < 1) throw DomainError("box half-width must be at least 1");
        (void)size();
    }

    bool contains(const Point& p) const {
        for (int i = 0; i < d; ++i) {
            if (p[i] < -R || p[i] > R) return false;
        }
        return true;
    }

    /// Row-major position; lexicographic order of points equals index order.
    i64 index_of(const Point& p) const {
        i64 idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * side() + (p[i] + R);
        return idx;
    }

    Point point_at(i64 idx) const {
        Point p{};
        for (int i = d - 1; i >= 0; --i) {
            p[i] = idx % side() - R;
            idx /= side();
        }
        return p;
    }

    friend bool operator==(const Box&, const Box&) = default;
};

enum class SetKind { visible, kfree_lattice, bfree_lattice, kfree_ring };

inline std::string_view kind_name(SetKind k) {
    switch (k) {
        case SetKind::visible: return "visible";
        case SetKind::kfree_lattice: return "kfree_lattice";
        case SetKind::bfree_lattice: return "bfree_lattice";
        case SetKind::kfree_ring: return "kfree_ring";
    }
    return "?";
}

/// Which set V is meant.
struct VSpec {
    SetKind kind = SetKind::visible;
    int d = 2;
    int k = 1;
    std::vector<i64> B;            ///< bfree_lattice only
    RingId ring = RingId::gauss;   ///< kfree_ring only

    static VSpec visible(int d) { return finish({SetKind::visible, d, 1, {}, RingId::gauss}); }
    static VSpec kfree_lattice(int d, int k) { return finish({SetKind::kfree_lattice, d, k, {}, RingId::gauss}); }
    static VSpec bfree_lattice(int d, std::vector<i64> b) {
        std::sort(b.begin(), b.end());
        return finish({SetKind::bfree_lattice, d, 1, std::move(b), RingId::gauss});
    }
    static VSpec kfree_ring(RingId ring, int k) {
        return finish({SetKind::kfree_ring, ring_degree(ring), k, {}, ring});
    }

    bool is_ring() const { return kind == SetKind::kfree_ring; }

    void validate() const {
        if (d < 1 || d > kMaxDim) throw ConfigError("dimension must be 1, 2 or 3");
        switch (kind) {
            case SetKind::visible: break;
            case SetKind::kfree_lattice:
            case SetKind::kfree_ring:
                if (k < 2) throw ConfigError("k must be at least 2");
                if (k > 16) throw ConfigError("k must be at most 16");
                if (kind == SetKind::kfree_ring && d != ring_degree(ring))
                    throw ConfigError("ring sets live in dimension equal to the ring degree");
                break;
            case SetKind::bfree_lattice:
                if (B.empty()) throw ConfigError("B must be nonempty");
                for (std::size_t i = 0; i < B.size(); ++i) {
                    if (B[i] < 2) throw ConfigError("elements of B must be at least 2");
                    for (std::size_t j = 0; j < B.size(); ++j) {
                        if (i != j && B[j] % B[i] == 0) throw ConfigError("B is not primitive");
                    }
                }
                break;
        }
    }

    /// Pairwise coprime moduli with summable reciprocal indices.
    bool is_erdos() const {
        switch (kind) {
            case SetKind::visible: return d >= 2;
            case SetKind::kfree_lattice: return k * d >= 2;
            case SetKind::kfree_ring: return true;
            case SetKind::bfree_lattice:
                for (std::size_t i = 0; i < B.size(); ++i)
                    for (std::size_t j = i + 1; j < B.size(); ++j)
                        if (gcd(B[i], B[j]) != 1) return false;
                return true;
        }
        return false;
    }

    friend bool operator==(const VSpec&, const VSpec&) = default;

private:
    static VSpec finish(VSpec s) {
        s.validate();
        return s;
    }
};

inline std::string describe(const VSpec& s) {
    std::string out(kind_name(s.kind));
    switch (s.kind) {
        case SetKind::visible: out += "(d=" + std::to_string(s.d) + ")"; break;
        case SetKind::kfree_lattice:
            out += "(d=" + std::to_string(s.d) + ",k=" + std::to_string(s.k) + ")";
            break;
        case SetKind::bfree_lattice: out += "(d=" + std::to_string(s.d) + ",|B|=" + std::to_string(s.B.size()) + ")"; break;
        case SetKind::kfree_ring: out += "(" + std::string(ring_name(s.ring)) + ",k=" + std::to_string(s.k) + ")"; break;
    }
    return out;
}

/// gcd of the first d coordinates (0 for the origin).
inline i64 coordinate_gcd(const Point& p, int d) {
    i64 g = 0;
    for (int i = 0; i < d; ++i) g = gcd(g, p[i]);
    return g;
}

/// Membership of a single point, decided from first principles (coordinate
/// gcd or ring factorisation). Independent of the sieve.
inline bool contains_point(const VSpec& spec, const Point& p) {
    switch (spec.kind) {
        case SetKind::visible: return coordinate_gcd(p, spec.d) == 1;
        case SetKind::kfree_lattice: {
            const i64 g = coordinate_gcd(p, spec.d);
            return g != 0 && is_k_free_integer(g, spec.k);
        }
        case SetKind::bfree_lattice: {
            const i64 g = coordinate_gcd(p, spec.d);
            if (g == 0) return false;
            return std::none_of(spec.B.begin(), spec.B.end(), [g](i64 b) { return g % b == 0; });
        }
        case SetKind::kfree_ring: return is_k_free(to_quad(p, spec.ring), spec.k);
    }
    return false;
}

/// Thread count from the KFREE_THREADS environment variable (default 1).
inline unsigned default_threads() {
    if (const char* env = std::getenv("KFREE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    return 1;
}

namespace detail {

/// Runs fn(lo, hi) over a partition of [0, n) into contiguous slabs.
inline void for_slabs(i64 n, unsigned threads, const std::function<void(i64, i64)>& fn) {
    if (threads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    const i64 t = std::min<i64>(threads, n);
    std::vector<std::thread> pool;
    for (i64 s = 0; s < t; ++s) {
        const i64 lo = n * s / t;
        const i64 hi = n * (s + 1) / t;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Largest |N(x)| over the box; attained on the boundary by homogeneity.
inline i64 max_abs_norm(RingId ring, i64 R) {
    if (ring == RingId::rational) return R;
    i64 best = 0;
    for (i64 t = -R; t <= R; ++t) {
        for (const QuadInt& x : {QuadInt{R, t, ring}, QuadInt{-R, t, ring}, QuadInt{t, R, ring}, QuadInt{t, -R, ring}})
            best = std::max(best, abs_norm(x));
    }
    return best;
}

/// Dense membership bitmap of V over a box.
class Window {
public:
    Window(VSpec spec, Box box) : spec_(std::move(spec)), box_(box), bits_(static_cast<std::size_t>(box.size()), 0) {}

    const VSpec& spec() const { return spec_; }
    const Box& box() const { return box_; }

    bool contains(const Point& p) const {
        if (!box_.contains(p)) throw PreconditionError("point " + point_str(p, box_.d) + " outside sieved window");
        return bits_[static_cast<std::size_t>(box_.index_of(p))] != 0;
    }

    i64 count() const { return std::count(bits_.begin(), bits_.end(), std::uint8_t{1}); }

    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
    VSpec spec_;
    Box box_;
    std::vector<std::uint8_t> bits_;
};

namespace detail {

inline void sieve_lattice_kind(Window& w, unsigned threads) {
    const VSpec& spec = w.spec();
    const Box& box = w.box();
    const i64 R = box.R;
    // good[g]: is a point with coordinate gcd g in V?
    std::vector<std::uint8_t> good(static_cast<std::size_t>(R) + 1, 1);
    good[0] = 0;
    auto strike = [&](i64 b) {
        for (i64 m = b; m <= R; m += b) good[static_cast<std::size_t>(m)] = 0;
    };
    switch (spec.kind) {
        case SetKind::visible:
            for (i64 g = 2; g <= R; ++g) good[static_cast<std::size_t>(g)] = 0;
            break;
        case SetKind::kfree_lattice:
            for (i64 p : primes_up_to(R)) {
                i64 q = 1;
                bool fits = true;
                for (int e = 0; e < spec.k && fits; ++e) {
                    if (q > R / p) fits = false;
                    else q *= p;
                }
                if (fits) strike(q);
            }
            break;
        case SetKind::bfree_lattice:
            for (i64 b : spec.B)
                if (b <= R) strike(b);
            break;
        case SetKind::kfree_ring: break;
    }
    const i64 side = box.side();
    const i64 per_row = box.size() / side;
    auto& bits = w.bits();
    for_slabs(side, threads, [&](i64 lo, i64 hi) {
        for (i64 idx = lo * per_row; idx < hi * per_row; ++idx) {
            const i64 g = coordinate_gcd(box.point_at(idx), box.d);
            bits[static_cast<std::size_t>(idx)] = good[static_cast<std::size_t>(g)];
        }
    });
}

inline void sieve_ring_kind(Window& w, unsigned threads) {
    const VSpec& spec = w.spec();
    const Box& box = w.box();
    const i64 R = box.R;
    auto& bits = w.bits();
    std::fill(bits.begin(), bits.end(), std::uint8_t{1});
    bits[static_cast<std::size_t>(box.index_of(Point{}))] = 0;

    const RingSpec ring = make_ring(spec.ring);
    const i64 max_norm = max_abs_norm(spec.ring, R);
    // |N(pi)|^k <= max_norm  <=>  |N(pi)| <= floor(max_norm^(1/k))
    i64 norm_bound = 1;
    while (true) {
        const i64 next = norm_bound + 1;
        i128 v = 1;
        for (int e = 0; e < spec.k && v <= max_norm; ++e) v *= next;
        if (v > max_norm) break;
        norm_bound = next;
    }
    std::vector<ModulusLattice> moduli;
    for (const RingPrime& rp : primes_up_to_norm(ring, norm_bound)) moduli.push_back(ModulusLattice::ideal_power(rp.pi, spec.k));

    const i64 side = box.side();
    for_slabs(side, threads, [&](i64 lo, i64 hi) {
        const i64 xlo = lo - R, xhi = hi - 1 - R;  // first-coordinate range of this slab
        for (const ModulusLattice& m : moduli) {
            const Mat& h = m.basis();
            if (box.d == 1) {
                const i64 a = h[0][0];
                for (i64 x = a * floor_div(xlo + a - 1, a); x <= xhi; x += a)
                    bits[static_cast<std::size_t>(x + R)] = 0;
                continue;
            }
            const i64 a = h[0][0], c = h[1][0], e = h[1][1];
            // lattice points i*(a, c) + j*(0, e)
            for (i64 i = floor_div(xlo + a - 1, a); i * a <= xhi; ++i) {
                const i64 x = i * a;
                const i64 y0 = checked::mul(i, c);
                const i64 jlo = floor_div(-R - y0 + e - 1, e);
                const i64 jhi = floor_div(R - y0, e);
                for (i64 j = jlo; j <= jhi; ++j) {
                    const i64 y = y0 + j * e;
                    bits[static_cast<std::size_t>((x + R) * side + (y + R))] = 0;
                }
            }
        }
    });
}

}  // namespace detail

/// Exact membership window of V over the box.
inline Window sieve_window(const VSpec& spec, const Box& box, unsigned threads = 1) {
    spec.validate();
    box.validate();
    if (box.d != spec.d) throw ConfigError("box dimension does not match the set");
    Window w(spec, box);
    if (spec.is_ring()) detail::sieve_ring_kind(w, threads);
    else detail::sieve_lattice_kind(w, threads);
    return w;
}

/// The sieved portion of V: sorted, duplicate-free, origin excluded.
struct PointSet {
    VSpec spec;
    Box box;
    std::vector<Point> points;

    bool contains(const Point& p) const { return std::binary_search(points.begin(), points.end(), p); }

    friend bool operator==(const PointSet&, const PointSet&) = default;
};

inline PointSet to_point_set(const Window& w) {
    PointSet ps{w.spec(), w.box(), {}};
    const auto& bits = w.bits();
    ps.points.reserve(static_cast<std::size_t>(w.count()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) ps.points.push_back(w.box().point_at(static_cast<i64>(i)));
    }
    return ps;
}

inline PointSet sieve(const VSpec& spec, const Box& box, unsigned threads = 1) {
    return to_point_set(sieve_window(spec, box, threads));
}

/// Restriction of a point set to a smaller concentric box.
inline PointSet restrict_to(const PointSet& ps, i64 R) {
    if (R > ps.box.R) throw DomainError("restriction radius exceeds the sieved box");
    PointSet out{ps.spec, Box{ps.box.d, R}, {}};
    for (const Point& p : ps.points)
        if (out.box.contains(p)) out.points.push_back(p);
    return out;
}

struct Density {
    i64 numerator;
    i64 denominator;
    double value;
};

/// |points| / |box| as a reduced fraction; the origin counts in the denominator.
inline Density density(const PointSet& ps) {
    const i64 n = static_cast<i64>(ps.points.size());
    const i64 total = ps.box.size();
    const i64 g = gcd(n, total);
    return {n / g, total / g, static_cast<double>(n) / static_cast<double>(total)};
}

}  // namespace kfree
