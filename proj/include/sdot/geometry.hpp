// SPDX-License-Identifier: MIT
//
// Small 2D geometry kit: points, intervals, convex polygons, half-plane
// clipping and polygon/line chords. 1D problems reuse Vec2 with y = 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sdot/errors.hpp"

namespace sdot {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool empty(double eps = 0.0) const { return hi - lo < -eps; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Convex polygon, counter-clockwise vertex list. An empty vertex list is the
// empty polygon.
using Polygon = std::vector<Vec2>;

inline double polygon_area(const Polygon& p) {
    double a = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const Vec2& u = p[k];
        const Vec2& v = p[(k + 1) % p.size()];
        a += u.x * v.y - v.x * u.y;
    }
    return 0.5 * a;
}

inline Vec2 polygon_centroid(const Polygon& p) {
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const Vec2& u = p[k];
        const Vec2& v = p[(k + 1) % p.size()];
        double cross = u.x * v.y - v.x * u.y;
        a += cross;
        cx += (u.x + v.x) * cross;
        cy += (u.y + v.y) * cross;
    }
    if (std::abs(a) < 1e-300) {
        // Degenerate polygon: fall back to vertex average.
        Vec2 m{};
        for (const Vec2& v : p) m = m + v;
        return (1.0 / static_cast<double>(p.size())) * m;
    }
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

inline double polygon_diameter(const Polygon& p) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            d2 = std::max(d2, norm2(p[i] - p[j]));
    return std::sqrt(d2);
}

// Sutherland-Hodgman clip against the half-plane {x : dot(a, x) <= b}.
inline Polygon clip_halfplane(const Polygon& poly, Vec2 a, double b, double eps = 1e-12) {
    if (poly.empty()) return {};
    double scale = std::max(norm(a), 1.0);
    Polygon out;
    out.reserve(poly.size() + 1);
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const Vec2& u = poly[k];
        const Vec2& v = poly[(k + 1) % poly.size()];
        double su = dot(a, u) - b;
        double sv = dot(a, v) - b;
        bool in_u = su <= eps * scale;
        bool in_v = sv <= eps * scale;
        if (in_u) out.push_back(u);
        if (in_u != in_v) {
            double t = su / (su - sv);
            out.push_back(u + t * (v - u));
        }
    }
    if (out.size() < 3 || std::abs(polygon_area(out)) < 1e-24) return {};
    return out;
}

struct Segment {
    Vec2 a;
    Vec2 b;
    double length() const { return norm(b - a); }
};

// Chord of a convex polygon along the line {x : dot(n, x) = c}, or nullopt
// when the intersection is empty or a single point.
inline std::optional<Segment> polygon_line_chord(const Polygon& poly, Vec2 n, double c,
                                                 double eps = 1e-12) {
    if (poly.empty()) return std::nullopt;
    double scale = std::max(norm(n), 1.0);
    Vec2 dir{-n.y, n.x};  // direction along the line
    std::vector<Vec2> hits;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const Vec2& u = poly[k];
        const Vec2& v = poly[(k + 1) % poly.size()];
        double su = dot(n, u) - c;
        double sv = dot(n, v) - c;
        if (std::abs(su) <= eps * scale) hits.push_back(u);
        if ((su < -eps * scale && sv > eps * scale) || (su > eps * scale && sv < -eps * scale)) {
            double t = su / (su - sv);
            hits.push_back(u + t * (v - u));
        }
    }
    if (hits.size() < 2) return std::nullopt;
    auto [mn, mx] = std::minmax_element(hits.begin(), hits.end(),
                                        [&](Vec2 p, Vec2 q) { return dot(dir, p) < dot(dir, q); });
    Segment s{*mn, *mx};
    if (s.length() < 1e-12) return std::nullopt;
    return s;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double l2 = norm2(d);
    if (l2 < 1e-300) return norm(p - a);
    double t = std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
    return norm(p - (a + t * d));
}

inline void require_convex_ccw(const Polygon& p) {
    if (p.size() < 3) throw InputError("polygon must have at least 3 vertices");
    if (polygon_area(p) <= 0.0) throw InputError("polygon must be counter-clockwise");
    for (std::size_t k = 0; k < p.size(); ++k) {
        Vec2 u = p[(k + 1) % p.size()] - p[k];
        Vec2 v = p[(k + 2) % p.size()] - p[(k + 1) % p.size()];
        if (u.x * v.y - u.y * v.x < -1e-12 * (norm(u) * norm(v)))
            throw InputError("polygon must be convex");
    }
}

}  // namespace sdot
