#pragma once

// Static renderings of planar point sets: filled dots for the first set,
// open circles for an optional second set, and a cross at the origin.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "kfree/errors.hpp"
#include "kfree/point_set.hpp"

namespace kfree {

struct RenderOptions {
    double unit = 10.0;           ///< pixels per lattice unit
    bool real_embedding = false;  ///< place m + n w at (m - n/2, n sqrt(3)/2)
};

namespace detail {

inline std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

struct Plane {
    double x, y;
};

inline Plane embed(const Point& p, bool real_embedding) {
    if (!real_embedding) return {static_cast<double>(p[0]), static_cast<double>(p[1])};
    return {static_cast<double>(p[0]) - 0.5 * static_cast<double>(p[1]), std::sqrt(3.0) / 2.0 * static_cast<double>(p[1])};
}

inline void require_planar(const PointSet& ps) {
    if (ps.box.d != 2) throw ConfigError("rendering needs planar point sets");
}

}  // namespace detail

inline std::string render_svg(const PointSet& dots, const std::optional<PointSet>& circles = std::nullopt,
                              const RenderOptions& opt = {}) {
    detail::require_planar(dots);
    i64 R = dots.box.R;
    if (circles) {
        detail::require_planar(*circles);
        R = std::max(R, circles->box.R);
    }
    const double half = (static_cast<double>(R) + 1.0) * opt.unit;
    const double size = 2 * half;
    auto sx = [&](double x) { return detail::fmt2(half + x * opt.unit); };
    auto sy = [&](double y) { return detail::fmt2(half - y * opt.unit); };
    const double rdot = opt.unit * 0.25;
    const double rcirc = opt.unit * 0.4;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt2(size) + "\" height=\"" + detail::fmt2(size) +
           "\" viewBox=\"0 0 " + detail::fmt2(size) + " " + detail::fmt2(size) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<g fill=\"black\">\n";
    for (const Point& p : dots.points) {
        const auto q = detail::embed(p, opt.real_embedding);
        out += "<circle cx=\"" + sx(q.x) + "\" cy=\"" + sy(q.y) + "\" r=\"" + detail::fmt2(rdot) + "\"/>\n";
    }
    out += "</g>\n";
    if (circles) {
        out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + detail::fmt2(opt.unit * 0.08) + "\">\n";
        for (const Point& p : circles->points) {
            const auto q = detail::embed(p, opt.real_embedding);
            out += "<circle cx=\"" + sx(q.x) + "\" cy=\"" + sy(q.y) + "\" r=\"" + detail::fmt2(rcirc) + "\"/>\n";
        }
        out += "</g>\n";
    }
    const double c = 0.35;
    out += "<g stroke=\"black\" stroke-width=\"" + detail::fmt2(opt.unit * 0.1) + "\">\n";
    out += "<line x1=\"" + sx(-c) + "\" y1=\"" + sy(-c) + "\" x2=\"" + sx(c) + "\" y2=\"" + sy(c) + "\"/>\n";
    out += "<line x1=\"" + sx(-c) + "\" y1=\"" + sy(c) + "\" x2=\"" + sx(c) + "\" y2=\"" + sy(-c) + "\"/>\n";
    out += "</g>\n</svg>\n";
    return out;
}

/// Binary PPM (P6): black cells for the first set, grey rings for the second,
/// a red cross at the origin. Cell size is opt.unit pixels (rounded).
inline std::string render_ppm(const PointSet& dots, const std::optional<PointSet>& circles = std::nullopt,
                              const RenderOptions& opt = {}) {
    detail::require_planar(dots);
    i64 R = dots.box.R;
    if (circles) {
        detail::require_planar(*circles);
        R = std::max(R, circles->box.R);
    }
    const i64 cell = std::max<i64>(2, std::llround(opt.unit / 2));
    const i64 side = (2 * R + 3) * cell;
    if (side > 8000) throw ResourceError("image too large");
    std::vector<unsigned char> px(static_cast<std::size_t>(side * side * 3), 255);
    auto set = [&](i64 x, i64 y, unsigned char r, unsigned char g, unsigned char b) {
        if (x < 0 || y < 0 || x >= side || y >= side) return;
        const std::size_t i = static_cast<std::size_t>((y * side + x) * 3);
        px[i] = r;
        px[i + 1] = g;
        px[i + 2] = b;
    };
    auto centre = [&](const Point& p) {
        const auto q = detail::embed(p, opt.real_embedding);
        return std::pair<i64, i64>{std::llround((q.x + R + 1.5) * cell), std::llround((R + 1.5 - q.y) * cell)};
    };
    const i64 h = cell / 2;
    if (circles) {
        for (const Point& p : circles->points) {
            const auto [cx, cy] = centre(p);
            for (i64 t = -h; t <= h; ++t) {
                set(cx + t, cy - h, 128, 128, 128);
                set(cx + t, cy + h, 128, 128, 128);
                set(cx - h, cy + t, 128, 128, 128);
                set(cx + h, cy + t, 128, 128, 128);
            }
        }
    }
    for (const Point& p : dots.points) {
        const auto [cx, cy] = centre(p);
        for (i64 dy = -h / 2; dy <= h / 2; ++dy)
            for (i64 dx = -h / 2; dx <= h / 2; ++dx) set(cx + dx, cy + dy, 0, 0, 0);
    }
    const auto [ox, oy] = centre(Point{});
    for (i64 t = -h; t <= h; ++t) {
        set(ox + t, oy + t, 220, 0, 0);
        set(ox + t, oy - t, 220, 0, 0);
    }
    std::string out = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

}  // namespace kfree
