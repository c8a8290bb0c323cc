#include <gtest/gtest.h>

#include <sstream>

#include "kfree/io.hpp"
#include "kfree/kfree.hpp"

using namespace kfree;
using kfree::io::json;

namespace {

std::vector<PointSet> samples() {
    return {sieve(VSpec::visible(2), Box{2, 7}), sieve(VSpec::kfree_lattice(3, 2), Box{3, 3}),
            sieve(VSpec::bfree_lattice(1, {4, 9, 25}), Box{1, 40}), sieve(VSpec::kfree_ring(RingId::golden, 3), Box{2, 9}),
            PointSet{VSpec::kfree_ring(RingId::eisenstein, 2), Box{2, 4}, {}}};
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(Json, PointSetRoundTrip) {
    for (const PointSet& ps : samples()) {
        const json j = io::pointset_json(ps);
        EXPECT_EQ(j["schema"], "pointset/1");
        EXPECT_EQ(io::pointset_from_json(json::parse(j.dump())), ps);
        EXPECT_EQ(io::pointset_json(ps).dump(), j.dump());
    }
}

TEST(Json, Layout) {
    const PointSet ps = sieve(VSpec::kfree_ring(RingId::gauss, 2), Box{2, 1});
    EXPECT_EQ(io::pointset_json(ps).dump(),
              R"({"schema":"pointset/1","spec":{"kind":"kfree_ring","d":2,"ring":"gauss","k":2},"box":{"d":2,"R":1},)"
              R"("points":[[-1,-1],[-1,0],[-1,1],[0,-1],[0,1],[1,-1],[1,0],[1,1]]})");
}

TEST(Json, MalformedInputIsConfigError) {
    const std::vector<std::string> bad{
        R"({"schema":"pointset/2","spec":{"kind":"visible","d":2},"box":{"d":2,"R":1},"points":[]})",
        R"({"schema":"pointset/1","spec":{"kind":"nonsense","d":2},"box":{"d":2,"R":1},"points":[]})",
        R"({"schema":"pointset/1","spec":{"kind":"visible","d":2},"box":{"d":2,"R":0},"points":[]})",
        R"({"schema":"pointset/1","spec":{"kind":"visible","d":2},"box":{"d":3,"R":1},"points":[]})",
        R"({"schema":"pointset/1","spec":{"kind":"visible","d":2},"box":{"d":2,"R":1},"points":[[0,0]]})",
        R"({"schema":"pointset/1","spec":{"kind":"visible","d":2},"box":{"d":2,"R":1},"points":[[1,0],[0,1]]})",
        R"({"schema":"pointset/1","spec":{"kind":"visible","d":2},"box":{"d":2,"R":1},"points":[[5,0]]})",
        R"({"schema":"pointset/1","spec":{"kind":"visible","d":2},"box":{"d":2,"R":1},"points":[[1]]})",
        R"({"schema":"pointset/1","spec":{"kind":"kfree_lattice","d":2,"k":1},"box":{"d":2,"R":1},"points":[]})",
        R"({"schema":"pointset/1","spec":{"kind":"bfree_lattice","d":2,"B":[2,4]},"box":{"d":2,"R":1},"points":[]})",
        R"({"schema":"pointset/1","spec":{"kind":"kfree_ring","d":2,"ring":"zz","k":2},"box":{"d":2,"R":1},"points":[]})",
        R"({"schema":"pointset/1"})",
        R"([1,2,3])",
    };
    for (const std::string& s : bad) EXPECT_THROW(io::pointset_from_json(json::parse(s)), ConfigError) << s;
}

TEST(Binary, RoundTripAndDeterminism) {
    for (const PointSet& ps : samples()) {
        std::stringstream a, b;
        io::write_binary(a, ps);
        io::write_binary(b, ps);
        EXPECT_EQ(a.str(), b.str());
        EXPECT_EQ(a.str().substr(0, 4), "KFPS");
        std::istringstream in(a.str());
        EXPECT_EQ(io::read_binary(in), ps);
    }
}

TEST(Binary, CorruptInput) {
    std::stringstream out;
    io::write_binary(out, sieve(VSpec::visible(2), Box{2, 3}));
    const std::string good = out.str();

    std::istringstream magic("XXXX" + good.substr(4));
    EXPECT_THROW(io::read_binary(magic), ConfigError);
    for (std::size_t cut : {std::size_t{3}, std::size_t{9}, good.size() / 2, good.size() - 1}) {
        std::istringstream trunc(good.substr(0, cut));
        EXPECT_THROW(io::read_binary(trunc), ConfigError) << cut;
    }
    std::string kind = good;
    kind[5] = 9;
    std::istringstream bad_kind(kind);
    EXPECT_THROW(io::read_binary(bad_kind), ConfigError);
}

TEST(Svg, Deterministic) {
    const PointSet v = sieve(VSpec::visible(2), Box{2, 30});
    const PointSet g = sieve(VSpec::kfree_ring(RingId::gauss, 2), Box{2, 30});
    const std::string a = render_svg(v, g);
    EXPECT_EQ(a, render_svg(v, g));
    EXPECT_EQ(a.rfind("<?xml", 0), 0u);
    EXPECT_EQ(count(a, "<circle"), v.points.size() + g.points.size());
    EXPECT_EQ(count(a, "<line"), 2u);
    EXPECT_NE(a.find("fill=\"none\""), std::string::npos);
}

TEST(Svg, SingleAndEmpty) {
    const PointSet v = sieve(VSpec::visible(2), Box{2, 5});
    const std::string one = render_svg(v);
    EXPECT_EQ(count(one, "<circle"), v.points.size());
    EXPECT_EQ(one.find("fill=\"none\""), std::string::npos);

    const PointSet empty{VSpec::visible(2), Box{2, 3}, {}};
    const std::string e = render_svg(empty);
    EXPECT_EQ(count(e, "<circle"), 0u);
    EXPECT_EQ(count(e, "<line"), 2u);
    EXPECT_NE(e.find("</svg>"), std::string::npos);
}

TEST(Svg, RealEmbedding) {
    const PointSet one{VSpec::kfree_ring(RingId::eisenstein, 2), Box{2, 1}, {make_point({0, 1})}};
    RenderOptions opt;
    opt.real_embedding = true;
    // m + n rho sits at (m - n/2, n sqrt(3)/2): (0,1) -> (-0.5, 0.866)
    const std::string s = render_svg(one, std::nullopt, opt);
    EXPECT_NE(s.find("cx=\"15.00\" cy=\"11.34\""), std::string::npos) << s;
    EXPECT_THROW(render_svg(sieve(VSpec::visible(3), Box{3, 2})), ConfigError);
}

TEST(Ppm, HeaderAndSize) {
    const PointSet v = sieve(VSpec::visible(2), Box{2, 10});
    const std::string p = render_ppm(v);
    const std::string header = "P6\n115 115\n255\n";
    EXPECT_EQ(p.substr(0, header.size()), header);
    EXPECT_EQ(p.size(), header.size() + 115u * 115u * 3u);
    EXPECT_EQ(p, render_ppm(v));
    EXPECT_THROW(render_ppm(sieve(VSpec::visible(2), Box{2, 1000})), ResourceError);
}

TEST(Reports, SchemasAndFields) {
    const VSpec vis = VSpec::visible(2);
    const std::vector<Point> sq{make_point({0, 0}), make_point({0, 1}), make_point({1, 0}), make_point({1, 1})};
    const json adm = io::admissibility_json(vis, sq, is_admissible(sq, vis));
    EXPECT_EQ(adm["schema"], "admissibility/1");
    EXPECT_EQ(adm["admissible"], false);

    const LocatorQuery q{{make_point({0, 0})}, {}, vis};
    const json loc = io::locator_json(q, find_locator(q));
    EXPECT_EQ(loc["schema"], "locator/1");
    EXPECT_EQ(loc["status"], "found");
    EXPECT_EQ(loc["t"], json::array({0, 1}));

    const json st = io::stabreport_json(stab_search(VSpec::kfree_ring(RingId::gauss, 2), 1, 8));
    EXPECT_EQ(st["schema"], "stabreport/1");
    EXPECT_EQ(st["passed"].size(), 8u);

    const json dens = io::density_json(density_report(vis, {5}));
    EXPECT_EQ(dens["schema"], "density/1");
    EXPECT_EQ(io::entropy_json(vis, entropy(vis))["schema"], "entropy/1");
}
