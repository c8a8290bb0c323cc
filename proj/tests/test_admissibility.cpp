#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "kfree/kfree.hpp"
#include "group_oracles.hpp"
#include "oracles.hpp"

using namespace kfree;

namespace {

std::vector<Point> pts(std::initializer_list<std::pair<i64, i64>> xs) {
    std::vector<Point> out;
    for (auto [a, b] : xs) out.push_back(make_point({a, b}));
    return out;
}

const std::vector<Point> kSquare = pts({{0, 0}, {0, 1}, {1, 0}, {1, 1}});

bool visible(const Point& p) { return std::gcd(p[0], p[1]) == 1; }

bool locates_visible(const Point& t, const std::vector<Point>& P, const std::vector<Point>& Q) {
    for (const Point& p : P)
        if (!visible(add(t, p, 2))) return false;
    for (const Point& q : Q)
        if (visible(add(t, q, 2))) return false;
    return true;
}

std::vector<Point> random_points(int n, i64 r) {
    std::set<Point> s;
    while (static_cast<int>(s.size()) < n) s.insert(make_point({oracle::uniform(-r, r), oracle::uniform(-r, r)}));
    return {s.begin(), s.end()};
}

}  // namespace

TEST(Cosets, Examples) {
    const auto two = ModulusLattice::scalar(2, 2);
    const auto one = pts({{0, 0}});
    const CosetProfile a = cosets_met(one, two);
    EXPECT_EQ(a.met, 1);
    ASSERT_TRUE(a.missed_example);
    EXPECT_EQ(*a.missed_example, make_point({0, 1}));

    const CosetProfile b = cosets_met(kSquare, two);
    EXPECT_EQ(b.met, 4);
    EXPECT_FALSE(b.missed_example);

    const auto ideal = ModulusLattice::ideal_power(QuadInt{1, 1, RingId::gauss}, 2);
    const auto diag = pts({{0, 0}, {1, 1}});
    EXPECT_EQ(cosets_met(diag, ideal).met, 2);
}

TEST(Cosets, MetNeverExceedsSizeOrIndex) {
    const auto lat = ModulusLattice::ideal_power(QuadInt{2, 1, RingId::gauss}, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto U = random_points(static_cast<int>(oracle::uniform(1, 12)), 6);
        const CosetProfile c = cosets_met(U, lat);
        EXPECT_LE(c.met, std::min<i64>(static_cast<i64>(U.size()), lat.index()));
        EXPECT_EQ(c.missed_example.has_value(), c.met < lat.index());
        if (c.missed_example)
            for (const Point& u : U) EXPECT_NE(lat.reduce(u), *c.missed_example);
    }
}

TEST(Admissible, Examples) {
    const VSpec vis = VSpec::visible(2);
    EXPECT_TRUE(is_admissible(std::vector<Point>{}, vis).admissible);
    const AdmissibilityResult sq = is_admissible(kSquare, vis);
    EXPECT_FALSE(sq.admissible);
    ASSERT_TRUE(sq.violator);
    EXPECT_EQ(sq.violator->modulus, ModulusLattice::scalar(2, 2));

    int admissible = 0;
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<Point> U;
        for (int i = 0; i < 4; ++i)
            if (mask >> i & 1) U.push_back(kSquare[static_cast<std::size_t>(i)]);
        admissible += is_admissible(U, vis).admissible;
    }
    EXPECT_EQ(admissible, 15);
}

TEST(Admissible, AgreesWithResidueOracle) {
    for (int trial = 0; trial < 400; ++trial) {
        const auto U = random_points(static_cast<int>(oracle::uniform(1, 14)), 4);
        EXPECT_EQ(is_admissible(U, VSpec::visible(2)).admissible, oracle::oracle_admissible_visible(U));
    }
}

TEST(Admissible, Hereditary) {
    const std::vector<VSpec> specs{VSpec::visible(2), VSpec::kfree_ring(RingId::gauss, 2),
                                   VSpec::kfree_ring(RingId::sqrt2, 2), VSpec::kfree_lattice(2, 2)};
    int checked = 0;
    for (const VSpec& spec : specs) {
        for (int trial = 0; trial < 60; ++trial) {
            const auto U = random_points(6, 3);
            if (!is_admissible(U, spec).admissible) continue;
            ++checked;
            for (int mask = 0; mask < 64; ++mask) {
                std::vector<Point> sub;
                for (int i = 0; i < 6; ++i)
                    if (mask >> i & 1) sub.push_back(U[static_cast<std::size_t>(i)]);
                EXPECT_TRUE(is_admissible(sub, spec).admissible) << describe(spec);
            }
        }
    }
    EXPECT_GT(checked, 50);
}

TEST(Admissible, LargerModuliNeverChangeVerdict) {
    const std::vector<VSpec> specs{VSpec::visible(2), VSpec::kfree_ring(RingId::eisenstein, 2),
                                   VSpec::bfree_lattice(2, {2, 9, 25})};
    for (const VSpec& spec : specs) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto U = random_points(static_cast<int>(oracle::uniform(1, 10)), 4);
            const bool verdict = is_admissible(U, spec).admissible;
            const auto more = family_moduli(spec, 400);
            EXPECT_EQ(check_moduli(U, more).admissible, verdict) << describe(spec);
        }
    }
}

TEST(Locator, Examples) {
    const VSpec vis = VSpec::visible(2);
    const LocatorResult a = find_locator({pts({{0, 0}}), {}, vis});
    ASSERT_EQ(a.status, LocatorStatus::found);
    EXPECT_EQ(*a.t, make_point({0, 1}));

    for (LocatorMode mode : {LocatorMode::scan, LocatorMode::crt}) {
        const LocatorResult b = find_locator({{}, kSquare, vis, mode});
        ASSERT_EQ(b.status, LocatorStatus::found);
        EXPECT_TRUE(locates_visible(*b.t, {}, kSquare));
    }
    EXPECT_TRUE(locates_visible(make_point({20, 14}), {}, kSquare));

    const LocatorResult c = find_locator({kSquare, {}, vis});
    EXPECT_EQ(c.status, LocatorStatus::impossible);
    ASSERT_TRUE(c.violator);
    EXPECT_EQ(c.violator->modulus.index(), 4);

    EXPECT_THROW(find_locator({pts({{0, 0}}), pts({{0, 0}}), vis}), DomainError);
}

TEST(Locator, RadiusExhaustedIsNotImpossible) {
    const LocatorResult r = find_locator({{}, kSquare, VSpec::visible(2), LocatorMode::scan, 3});
    EXPECT_EQ(r.status, LocatorStatus::not_found);
    EXPECT_FALSE(r.t);
}

TEST(Locator, EveryWindowSplitting) {
    int found = 0, impossible = 0;
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<Point> P, Q;
        for (int i = 0; i < 4; ++i) (mask >> i & 1 ? P : Q).push_back(kSquare[static_cast<std::size_t>(i)]);
        const LocatorResult r = find_locator({P, Q, VSpec::visible(2), LocatorMode::scan, 500});
        if (r.status == LocatorStatus::found) {
            ++found;
            EXPECT_TRUE(locates_visible(*r.t, P, Q));
            EXPECT_LE(std::max(std::abs((*r.t)[0]), std::abs((*r.t)[1])), 500);
        } else {
            EXPECT_EQ(r.status, LocatorStatus::impossible);
            ++impossible;
        }
    }
    EXPECT_EQ(found, 15);
    EXPECT_EQ(impossible, 1);
}

TEST(Locator, SoundAgainstFreshWindow) {
    const std::vector<VSpec> specs{VSpec::visible(2), VSpec::kfree_ring(RingId::gauss, 2),
                                   VSpec::kfree_ring(RingId::golden, 2), VSpec::kfree_lattice(2, 2)};
    int located = 0;
    for (const VSpec& spec : specs) {
        for (int trial = 0; trial < 12; ++trial) {
            auto all = random_points(5, 2);
            const std::size_t cut = static_cast<std::size_t>(oracle::uniform(1, 4));
            const std::vector<Point> P(all.begin(), all.begin() + static_cast<long>(cut));
            const std::vector<Point> Q(all.begin() + static_cast<long>(cut), all.end());
            for (LocatorMode mode : {LocatorMode::scan, LocatorMode::crt}) {
                const LocatorResult r = find_locator({P, Q, spec, mode, 400});
                if (r.status != LocatorStatus::found) continue;
                ++located;
                const Point t = *r.t;
                const i64 R = std::max(std::abs(t[0]), std::abs(t[1])) + 3;
                if (R <= 3000) {
                    const PointSet fresh = sieve(spec, Box{2, R});
                    for (const Point& p : P) EXPECT_TRUE(fresh.contains(add(t, p, 2))) << describe(spec);
                    for (const Point& q : Q) EXPECT_FALSE(fresh.contains(add(t, q, 2))) << describe(spec);
                } else {
                    for (const Point& p : P) EXPECT_TRUE(contains_point(spec, add(t, p, 2))) << describe(spec);
                    for (const Point& q : Q) EXPECT_FALSE(contains_point(spec, add(t, q, 2))) << describe(spec);
                }
                if (spec.is_ring()) {
                    const oracle::Ring orr = oracle::ring_of(std::string(ring_name(spec.ring)));
                    for (const Point& p : P) EXPECT_TRUE(oracle::is_k_free(orr, {t[0] + p[0], t[1] + p[1]}, 2));
                }
            }
        }
    }
    EXPECT_GT(located, 40);
}

TEST(Locator, CrtSystemIsHonoured) {
    const auto P = pts({{0, 0}, {1, 0}, {0, 1}});
    const auto Q = pts({{1, 1}, {2, 0}});
    const LocatorResult r = find_locator({P, Q, VSpec::visible(2), LocatorMode::crt, 200});
    ASSERT_EQ(r.status, LocatorStatus::found);
    ASSERT_TRUE(r.solution);
    EXPECT_TRUE(locates_visible(*r.t, P, Q));
    for (const Congruence& c : r.congruences) EXPECT_TRUE(c.modulus.contains(sub(*r.t, c.residue, 2)));
}

TEST(DensityBound, Examples) {
    const VSpec vis = VSpec::visible(2);
    EXPECT_DOUBLE_EQ(locator_density_bound(pts({{0, 0}}), vis, 2), 0.75);
    EXPECT_DOUBLE_EQ(locator_density_bound(std::vector<Point>{}, vis, 50), 1.0);
    EXPECT_GE(locator_density_bound(pts({{0, 0}}), vis, 10), locator_density_bound(pts({{0, 0}}), vis, 100));
    EXPECT_THROW(locator_density_bound(kSquare, vis, 10), DomainError);
}

TEST(DensityBound, MonotoneInTruncation) {
    const auto P = pts({{0, 0}, {1, 0}, {3, 2}});
    for (const VSpec& spec : {VSpec::visible(2), VSpec::kfree_ring(RingId::gauss, 2), VSpec::kfree_ring(RingId::sqrt2, 3)}) {
        double prev = 1.0;
        for (i64 n : {2, 5, 10, 30, 100}) {
            const double b = locator_density_bound(P, spec, n);
            EXPECT_LE(b, prev) << describe(spec);
            EXPECT_GT(b, 0.0);
            prev = b;
        }
    }
}

TEST(DensityBound, EmpiricalLocatorDensity) {
    const auto P = pts({{0, 0}, {1, 0}});
    const VSpec vis = VSpec::visible(2);
    const i64 R = 300;
    i64 hits = 0;
    for (i64 x = -R; x <= R; ++x)
        for (i64 y = -R; y <= R; ++y) hits += locates_visible(make_point({x, y}), P, {});
    const double empirical = static_cast<double>(hits) / static_cast<double>((2 * R + 1) * (2 * R + 1));
    EXPECT_GE(empirical, locator_density_bound(P, vis, 50) - 0.1);
}
