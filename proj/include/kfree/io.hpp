#pragma once

// Schema-versioned JSON documents and the compact binary point-set format.
//
// Binary layout (little-endian): "KFPS", u8 version = 1, u8 kind, u8 d,
// u8 k, u8 ring, u32 |B|, i64 B..., i64 R, u64 count, then count * d
// int32 coordinates.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kfree/admissibility.hpp"
#include "kfree/analytics.hpp"
#include "kfree/errors.hpp"
#include "kfree/point_set.hpp"
#include "kfree/symmetry.hpp"

namespace kfree::io {

using json = nlohmann::ordered_json;

inline json point_json(const Point& p, int d) {
    json a = json::array();
    for (int i = 0; i < d; ++i) a.push_back(p[i]);
    return a;
}

inline json points_json(const std::vector<Point>& pts, int d) {
    json a = json::array();
    for (const Point& p : pts) a.push_back(point_json(p, d));
    return a;
}

inline json quad_json(const QuadInt& x) { return json::array({x.a, x.b}); }

inline json matrix_json(const UniMat& m) { return json::array({m.a, m.b, m.c, m.d}); }

inline json matrices_json(const std::vector<UniMat>& ms) {
    json a = json::array();
    for (const UniMat& m : ms) a.push_back(matrix_json(m));
    return a;
}

inline json spec_json(const VSpec& s) {
    json j;
    j["kind"] = kind_name(s.kind);
    j["d"] = s.d;
    switch (s.kind) {
        case SetKind::visible: break;
        case SetKind::kfree_lattice: j["k"] = s.k; break;
        case SetKind::bfree_lattice: j["B"] = s.B; break;
        case SetKind::kfree_ring:
            j["ring"] = ring_name(s.ring);
            j["k"] = s.k;
            break;
    }
    return j;
}

inline VSpec spec_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "visible") return VSpec::visible(j.at("d").get<int>());
        if (kind == "kfree_lattice") return VSpec::kfree_lattice(j.at("d").get<int>(), j.at("k").get<int>());
        if (kind == "bfree_lattice") return VSpec::bfree_lattice(j.at("d").get<int>(), j.at("B").get<std::vector<i64>>());
        if (kind == "kfree_ring") return VSpec::kfree_ring(parse_ring_id(j.at("ring").get<std::string>()), j.at("k").get<int>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed spec: ") + e.what());
    }
    throw ConfigError("unknown set kind");
}

inline json box_json(const Box& b) { return json{{"d", b.d}, {"R", b.R}}; }

inline json pointset_json(const PointSet& ps) {
    json j;
    j["schema"] = "pointset/1";
    j["spec"] = spec_json(ps.spec);
    j["box"] = box_json(ps.box);
    j["points"] = points_json(ps.points, ps.box.d);
    return j;
}

namespace detail {
inline void check_point_set(const PointSet& ps) {
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        const Point& p = ps.points[i];
        if (!ps.box.contains(p)) throw ConfigError("point outside its box");
        if (p == Point{}) throw ConfigError("point set contains the origin");
        if (i > 0 && !(ps.points[i - 1] < p)) throw ConfigError("points not strictly sorted");
    }
}
}  // namespace detail

inline PointSet pointset_from_json(const json& j) {
    try {
        if (j.at("schema").get<std::string>() != "pointset/1") throw ConfigError("expected schema pointset/1");
        PointSet ps;
        ps.spec = spec_from_json(j.at("spec"));
        ps.box = Box{j.at("box").at("d").get<int>(), j.at("box").at("R").get<i64>()};
        ps.box.validate();
        if (ps.box.d != ps.spec.d) throw ConfigError("box and spec dimensions differ");
        for (const json& p : j.at("points")) {
            if (!p.is_array() || static_cast<int>(p.size()) != ps.box.d) throw ConfigError("point of wrong dimension");
            Point q{};
            for (int i = 0; i < ps.box.d; ++i) q[i] = p[static_cast<std::size_t>(i)].get<i64>();
            ps.points.push_back(q);
        }
        detail::check_point_set(ps);
        return ps;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed pointset: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("malformed pointset: ") + e.what());
    }
}

namespace detail {

template <typename T>
void put_le(std::ostream& os, T v) {
    using U = std::make_unsigned_t<T>;
    U u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        os.put(static_cast<char>(u & 0xff));
        u = static_cast<U>(u >> 8);
    }
}

template <typename T>
T get_le(std::istream& is) {
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        const int c = is.get();
        if (c == EOF) throw ConfigError("truncated binary point set");
        u = static_cast<U>(u | (static_cast<U>(static_cast<unsigned char>(c)) << (8 * i)));
    }
    return static_cast<T>(u);
}

}  // namespace detail

inline void write_binary(std::ostream& os, const PointSet& ps) {
    os.write("KFPS", 4);
    detail::put_le<std::uint8_t>(os, 1);
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(ps.spec.kind));
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(ps.spec.d));
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(ps.spec.k));
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(ps.spec.ring));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(ps.spec.B.size()));
    for (i64 b : ps.spec.B) detail::put_le<std::int64_t>(os, b);
    detail::put_le<std::int64_t>(os, ps.box.R);
    detail::put_le<std::uint64_t>(os, ps.points.size());
    for (const Point& p : ps.points)
        for (int i = 0; i < ps.box.d; ++i) detail::put_le<std::int32_t>(os, static_cast<std::int32_t>(p[i]));
}

inline PointSet read_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::string(magic, 4) != "KFPS") throw ConfigError("not a KFPS point set");
    if (detail::get_le<std::uint8_t>(is) != 1) throw ConfigError("unsupported KFPS version");
    const auto kind = detail::get_le<std::uint8_t>(is);
    const auto d = detail::get_le<std::uint8_t>(is);
    const auto k = detail::get_le<std::uint8_t>(is);
    const auto ring = detail::get_le<std::uint8_t>(is);
    const auto nb = detail::get_le<std::uint32_t>(is);
    if (kind > 3 || ring > 5 || nb > 100'000) throw ConfigError("corrupt KFPS header");
    std::vector<i64> B;
    for (std::uint32_t i = 0; i < nb; ++i) B.push_back(detail::get_le<std::int64_t>(is));
    PointSet ps;
    try {
        switch (static_cast<SetKind>(kind)) {
            case SetKind::visible: ps.spec = VSpec::visible(d); break;
            case SetKind::kfree_lattice: ps.spec = VSpec::kfree_lattice(d, k); break;
            case SetKind::bfree_lattice: ps.spec = VSpec::bfree_lattice(d, B); break;
            case SetKind::kfree_ring: ps.spec = VSpec::kfree_ring(static_cast<RingId>(ring), k); break;
        }
        ps.box = Box{d, detail::get_le<std::int64_t>(is)};
        ps.box.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("corrupt KFPS header: ") + e.what());
    }
    const auto count = detail::get_le<std::uint64_t>(is);
    if (count > static_cast<std::uint64_t>(ps.box.size())) throw ConfigError("KFPS point count exceeds box");
    ps.points.resize(count);
    for (Point& p : ps.points)
        for (int i = 0; i < d; ++i) p[i] = detail::get_le<std::int32_t>(is);
    detail::check_point_set(ps);
    return ps;
}

inline json profile_json(const CosetProfile& p) {
    json j;
    j["modulus"] = p.modulus.describe();
    j["index"] = p.modulus.index();
    j["met"] = p.met;
    j["missed_coset"] = p.missed_example ? point_json(*p.missed_example, p.modulus.dim()) : json(nullptr);
    return j;
}

inline json admissibility_body(const AdmissibilityResult& r) {
    json j;
    j["admissible"] = r.admissible;
    json certs = json::array();
    for (const CosetProfile& p : r.certificates) certs.push_back(profile_json(p));
    j["certificates"] = certs;
    j["violator"] = r.violator ? profile_json(*r.violator) : json(nullptr);
    return j;
}

inline json admissibility_json(const VSpec& spec, const std::vector<Point>& U, const AdmissibilityResult& r) {
    json j;
    j["schema"] = "admissibility/1";
    j["spec"] = spec_json(spec);
    j["U"] = points_json(U, spec.d);
    const json body = admissibility_body(r);
    for (const auto& [key, value] : body.items()) j[key] = value;
    return j;
}

inline json lattice_json(const ModulusLattice& m) {
    json basis = json::array();
    for (int c = 0; c < m.dim(); ++c) basis.push_back(point_json(column(m.basis(), c, m.dim()), m.dim()));
    return json{{"description", m.describe()}, {"basis_columns", basis}, {"index", m.index()}};
}

inline json locator_json(const LocatorQuery& q, const LocatorResult& r) {
    json j;
    j["schema"] = "locator/1";
    j["spec"] = spec_json(q.spec);
    j["P"] = points_json(q.P, q.spec.d);
    j["Q"] = points_json(q.Q, q.spec.d);
    j["mode"] = q.mode == LocatorMode::scan ? "scan" : "crt";
    j["radius"] = q.radius;
    j["status"] = status_name(r.status);
    j["t"] = r.t ? point_json(*r.t, q.spec.d) : json(nullptr);
    j["violator"] = r.violator ? profile_json(*r.violator) : json(nullptr);
    if (q.mode == LocatorMode::crt) {
        json cong = json::array();
        for (const Congruence& c : r.congruences)
            cong.push_back(json{{"residue", point_json(c.residue, q.spec.d)}, {"modulus", lattice_json(c.modulus)}});
        j["congruences"] = cong;
        j["solution"] = r.solution ? json{{"t0", point_json(r.solution->t0, q.spec.d)}, {"lattice", lattice_json(r.solution->lattice)}}
                                   : json(nullptr);
    }
    return j;
}

inline json stabreport_json(const StabReport& r) {
    json j;
    j["schema"] = "stabreport/1";
    j["spec"] = spec_json(r.spec);
    j["entry_bound"] = r.entry_bound;
    j["radius"] = r.radius;
    j["tested"] = r.tested.size();
    j["passed_count"] = r.passed.size();
    j["passed"] = matrices_json(r.passed);
    j["generators"] = matrices_json(r.generators);
    j["predicted_count"] = r.predicted.size();
    j["group_id"] = match_name(r.match);
    json ce = json::array();
    for (const auto& [m, w] : r.counterexamples) ce.push_back(json{{"matrix", matrix_json(m)}, {"w", point_json(w, 2)}});
    j["counterexamples"] = ce;
    return j;
}

inline json witness_json(const Witness& w) {
    json j;
    j["schema"] = "witness/1";
    j["ring"] = ring_name(w.ring);
    j["k"] = w.k;
    j["matrix"] = matrix_json(w.A);
    j["rho"] = quad_json(w.bad.rho);
    j["rho_tag"] = tag_name(w.bad.tag);
    j["rho_norm"] = abs_norm(w.bad.rho);
    j["w"] = point_json(w.bad.w, 2);
    j["A_w"] = quad_json(w.bad.image);
    json P = json::array();
    for (const QuadInt& pi : w.P) P.push_back(quad_json(pi));
    j["P"] = P;
    j["L"] = lattice_json(w.L);
    j["attempt"] = w.attempt;
    j["repairs"] = w.repairs;
    j["S"] = points_json(w.S, 2);
    std::vector<Point> AS;
    for (const Point& z : w.S) AS.push_back(w.A.apply(z));
    j["A_S"] = points_json(AS, 2);
    j["checks"] = json{{"S_admissible", w.S_check.admissible},
                       {"A_S_admissible", w.AS_check.admissible},
                       {"A_S_violator", w.AS_check.violator ? profile_json(*w.AS_check.violator) : json(nullptr)}};
    return j;
}

inline json theoretical_json(const Theoretical& t) {
    json j{{"value", t.value}, {"provenance", provenance_name(t.provenance)}};
    j["truncation"] = t.truncation ? json(*t.truncation) : json(nullptr);
    return j;
}

inline json density_json(const DensityReport& r) {
    json j;
    j["schema"] = "density/1";
    j["spec"] = spec_json(r.spec);
    j["theoretical"] = theoretical_json(r.theoretical);
    json rows = json::array();
    for (std::size_t i = 0; i < r.radii.size(); ++i) {
        rows.push_back(json{{"radius", r.radii[i]},
                            {"numerator", r.empirical[i].numerator},
                            {"denominator", r.empirical[i].denominator},
                            {"empirical", r.empirical[i].value},
                            {"rel_error", r.relative_errors[i]}});
    }
    j["rows"] = rows;
    return j;
}

inline json entropy_json(const VSpec& spec, const Theoretical& t) {
    json j;
    j["schema"] = "entropy/1";
    j["spec"] = spec_json(spec);
    const json body = theoretical_json(t);
    for (const auto& [key, value] : body.items()) j[key] = value;
    return j;
}

}  // namespace kfree::io
