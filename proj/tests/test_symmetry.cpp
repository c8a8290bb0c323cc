#include <gtest/gtest.h>

#include <set>

#include "kfree/kfree.hpp"
#include "group_oracles.hpp"
#include "oracles.hpp"

using namespace kfree;
using oracle::as_set;
using oracle::oracle_admissible;
using oracle::oracle_counterexample;
using oracle::oracle_group;
using oracle::oracle_matrix;

TEST(Enumerate, UnitEntryBound) {
    const auto e1 = enumerate_glz(2, 1);
    EXPECT_EQ(e1.size(), 40u);
    const auto s = as_set(e1);
    EXPECT_TRUE(s.count(UniMat::identity()));
    EXPECT_TRUE(s.count(UniMat{0, -1, 1, 0}));
    EXPECT_TRUE(s.count(UniMat{1, 0, 0, -1}));
    EXPECT_FALSE(s.count(UniMat{1, 1, 1, 1}));
    EXPECT_TRUE(std::is_sorted(e1.begin(), e1.end()));
    EXPECT_EQ(s.size(), e1.size());
}

TEST(Enumerate, MatchesBruteForce) {
    for (i64 E = 1; E <= 4; ++E) {
        std::size_t n = 0;
        for (i64 a = -E; a <= E; ++a)
            for (i64 b = -E; b <= E; ++b)
                for (i64 c = -E; c <= E; ++c)
                    for (i64 d = -E; d <= E; ++d) n += std::abs(a * d - b * c) == 1;
        EXPECT_EQ(enumerate_glz(2, E).size(), n);
    }
    EXPECT_EQ(enumerate_glz(2, 2).size(), 104u);
    EXPECT_THROW(enumerate_glz(2, 7), ResourceError);
    EXPECT_THROW(UniMat::of(1, 1, 1, 1), DomainError);
}

TEST(Generators, Examples) {
    EXPECT_EQ(expected_generators(VSpec::kfree_ring(RingId::gauss, 2)),
              (std::vector<UniMat>{{0, -1, 1, 0}, {1, 0, 0, -1}}));
    EXPECT_EQ(expected_generators(VSpec::kfree_ring(RingId::eisenstein, 2)),
              (std::vector<UniMat>{{0, 1, -1, 1}, {1, -1, 0, -1}}));
    EXPECT_EQ(expected_generators(VSpec::kfree_ring(RingId::sqrt2, 2)),
              (std::vector<UniMat>{{1, 2, 1, 1}, {1, 0, 0, -1}, {-1, 0, 0, -1}}));
    EXPECT_EQ(expected_generators(VSpec::kfree_ring(RingId::golden, 2)).front(), (UniMat{0, 1, 1, 1}));
    const oracle::Ring g = oracle::ring_of("golden");
    EXPECT_EQ(expected_generators(VSpec::kfree_ring(RingId::golden, 3)).front(), oracle_matrix(g, {0, 1}, false));
}

TEST(StabTest, Examples) {
    const VSpec g2 = VSpec::kfree_ring(RingId::gauss, 2);
    const Window w = sieve_window(g2, Box{2, required_radius(16, 2)});
    EXPECT_TRUE(stab_test(UniMat{0, -1, 1, 0}, w, 16).pass);
    const StabVerdict shear = stab_test(UniMat{1, 1, 0, 1}, w, 16);
    EXPECT_FALSE(shear.pass);
    ASSERT_TRUE(shear.counterexample);
    EXPECT_EQ(shear.counterexample, oracle_counterexample("gauss", 2, UniMat{1, 1, 0, 1}, 16));
    EXPECT_THROW(stab_test(UniMat{1, 1, 0, 1}, w, 40), PreconditionError);
}

TEST(StabTest, CounterexampleIsLeast) {
    for (const std::string name : {"gauss", "eisenstein", "sqrt2", "golden", "sqrt3"}) {
        const VSpec spec = VSpec::kfree_ring(parse_ring_id(name), 2);
        const i64 r = 12;
        const Window w = sieve_window(spec, Box{2, required_radius(r, 2)});
        for (const UniMat& M : enumerate_glz(2, 2)) {
            const StabVerdict v = stab_test(M, w, r);
            EXPECT_EQ(v.counterexample, oracle_counterexample(name, 2, M, r)) << name << " " << M.str();
        }
    }
}

TEST(StabTest, VisibleNormaliser) {
    const VSpec vis = VSpec::visible(2);
    const Window w = sieve_window(vis, Box{2, required_radius(64, 2)});
    for (const UniMat& M : enumerate_glz(2, 2)) EXPECT_TRUE(stab_test(M, w, 64).pass) << M.str();
    const StabReport rep = stab_search(vis, 2, 32);
    EXPECT_EQ(rep.passed.size(), rep.tested.size());
    EXPECT_EQ(rep.match, GroupMatch::exact);
}

TEST(StabSearch, Gaussian) {
    const std::set<UniMat> d4{{1, 0, 0, 1},  {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0},
                              {1, 0, 0, -1}, {-1, 0, 0, 1}, {0, 1, 1, 0},   {0, -1, -1, 0}};
    EXPECT_EQ(oracle_group("gauss", 2), d4);
    std::vector<UniMat> passed2;
    for (int k : {2, 3}) {
        const StabReport rep = stab_search(VSpec::kfree_ring(RingId::gauss, k), 2, 64);
        EXPECT_EQ(as_set(rep.passed), d4);
        EXPECT_EQ(rep.match, GroupMatch::exact);
        EXPECT_EQ(rep.counterexamples.size(), rep.tested.size() - 8);
        if (k == 2) passed2 = rep.passed;
        else EXPECT_EQ(rep.passed, passed2);
    }
}

TEST(StabSearch, Eisenstein) {
    const StabReport rep = stab_search(VSpec::kfree_ring(RingId::eisenstein, 2), 2, 64);
    EXPECT_EQ(rep.passed.size(), 12u);
    EXPECT_EQ(as_set(rep.passed), oracle_group("eisenstein", 2));
    EXPECT_EQ(rep.match, GroupMatch::exact);
    EXPECT_TRUE(is_bounded_group(rep.passed, 2));
}

class RealStab : public ::testing::TestWithParam<std::string> {};

TEST_P(RealStab, UnitsAndConjugationOnly) {
    const std::string name = GetParam();
    const std::set<UniMat> expect = oracle_group(name, 3);
    std::vector<UniMat> first;
    for (int k : {2, 3}) {
        const StabReport rep = stab_search(VSpec::kfree_ring(parse_ring_id(name), k), 3, 64);
        EXPECT_EQ(as_set(rep.passed), expect) << "k=" << k;
        EXPECT_EQ(as_set(rep.predicted), expect);
        EXPECT_EQ(rep.match, GroupMatch::exact);
        ASSERT_TRUE(rep.counterexamples.count(UniMat{1, 1, 0, 1}));
        if (first.empty()) first = rep.passed;
        else EXPECT_EQ(rep.passed, first);
    }
}

INSTANTIATE_TEST_SUITE_P(Rings, RealStab, ::testing::Values("sqrt2", "golden", "sqrt3"));

TEST(StabSearch, ClosedUnderProductsAndInverses) {
    for (RingId id : kQuadraticRings) {
        const StabReport rep = stab_search(VSpec::kfree_ring(id, 2), 3, 24);
        const std::set<UniMat> s = as_set(rep.passed);
        for (const UniMat& m : rep.passed) {
            EXPECT_TRUE(s.count(m.inverse()));
            for (const UniMat& n : rep.passed) {
                const UniMat p = m * n;
                if (p.entry_bound() <= 3) EXPECT_TRUE(s.count(p)) << m.str() << " * " << n.str();
            }
        }
        EXPECT_TRUE(is_bounded_group(rep.passed, 3));
    }
}

TEST(BadPrime, ShearOnGaussian) {
    const UniMat A{1, 1, 0, 1};
    const oracle::Ring g = oracle::ring_of("gauss");
    const BadPrime bp = bad_prime_witness(A, RingId::gauss, 2);
    EXPECT_EQ(bp.tag, PrimeTag::Split);
    EXPECT_TRUE(oracle::is_k_free(g, {bp.w[0], bp.w[1]}, 2));
    const Point img = A.apply(bp.w);
    EXPECT_EQ(bp.image, (QuadInt{img[0], img[1], RingId::gauss}));
    EXPECT_TRUE(oracle::divides(g, oracle::power(g, {bp.rho.a, bp.rho.b}, 2), {img[0], img[1]}));
    const i64 n = oracle::norm(g, {bp.rho.a, bp.rho.b});
    EXPECT_TRUE(oracle::is_prime(n));
    EXPECT_EQ(n % 4, 1);

    EXPECT_THROW(bad_prime_witness(UniMat{0, -1, 1, 0}, RingId::gauss, 2), PreconditionError);
    EXPECT_THROW(inadmissible_image_witness(UniMat{1, 0, 0, -1}, RingId::gauss, 2), PreconditionError);
}

TEST(BadPrime, NeverInertNorRamifiedForEvenK) {
    for (RingId id : kQuadraticRings) {
        for (int k : {2, 3}) {
            for (const UniMat& A : {UniMat{1, 1, 0, 1}, UniMat{1, 0, 1, 1}, UniMat{2, 1, 1, 1}}) {
                const VSpec spec = VSpec::kfree_ring(id, k);
                const Window w = sieve_window(spec, Box{2, required_radius(16, A.entry_bound())});
                if (stab_test(A, w, 16).pass) continue;
                const BadPrime bp = bad_prime_witness(A, id, k);
                EXPECT_NE(bp.tag, PrimeTag::Inert);
                if (k % 2 == 0) EXPECT_NE(bp.tag, PrimeTag::Ramified);
                EXPECT_TRUE(divides(pow(bp.rho, k), bp.image));
            }
        }
    }
}

TEST(Witness, ShearOnSquareFreeGaussians) {
    const UniMat A{1, 1, 0, 1};
    const Witness wit = inadmissible_image_witness(A, RingId::gauss, 2);
    const i64 n = abs_norm(pow(wit.bad.rho, 2));
    EXPECT_EQ(static_cast<i64>(wit.S.size()), n);
    EXPECT_TRUE(wit.S_check.admissible);
    EXPECT_FALSE(wit.AS_check.admissible);

    std::vector<Point> AS;
    for (const Point& p : wit.S) AS.push_back(A.apply(p));
    EXPECT_TRUE(oracle_admissible("gauss", 2, wit.S));
    EXPECT_FALSE(oracle_admissible("gauss", 2, AS));
    const VSpec spec = VSpec::kfree_ring(RingId::gauss, 2);
    EXPECT_TRUE(is_admissible(wit.S, spec).admissible);
    EXPECT_FALSE(is_admissible(AS, spec).admissible);
    EXPECT_EQ(wit.S.front(), wit.bad.w);
}

TEST(Witness, OtherRingsAndExponents) {
    const std::vector<std::pair<RingId, int>> cases{
        {RingId::gauss, 3}, {RingId::eisenstein, 2}, {RingId::sqrt2, 2}, {RingId::golden, 2}};
    for (const auto& [id, k] : cases) {
        const UniMat A{1, 1, 0, 1};
        const Witness wit = inadmissible_image_witness(A, id, k);
        std::vector<Point> AS;
        for (const Point& p : wit.S) AS.push_back(A.apply(p));
        const std::string name(ring_name(id));
        EXPECT_TRUE(oracle_admissible(name, k, wit.S)) << name << " k=" << k;
        EXPECT_FALSE(oracle_admissible(name, k, AS)) << name << " k=" << k;
    }
}
