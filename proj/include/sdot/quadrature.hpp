// SPDX-License-Identifier: MIT
//
// Deterministic adaptive Gauss-Legendre quadrature over intervals, segments
// and convex polygons. Callers may register refinement points (location +
// length-scale); panels near a refinement point are pre-split to width
// <= scale/4 inside a 12*scale neighborhood, with a geometric grading in the
// innermost [0, scale] band so integrable singularities resolve without deep
// adaptive recursion.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "sdot/errors.hpp"
#include "sdot/geometry.hpp"

namespace sdot {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_depth = 50;
    int base_order = 15;

    void validate() const {
        if (rel_tol <= 0.0 || abs_tol <= 0.0) throw InputError("quadrature tolerances must be > 0");
        if (base_order < 5) throw InputError("quadrature base_order must be >= 5");
        if (max_depth < 1) throw InputError("quadrature max_depth must be >= 1");
    }
};

struct RefinePoint1D {
    double location;
    double scale;
};

struct RefinePoint2D {
    Vec2 location;
    double scale;
};

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// the Legendre recurrence. Deterministic for a given order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussRule(int order) {
        nodes.resize(order);
        weights.resize(order);
        for (int i = 0; i < order; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= order; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    template <typename F>
    double apply(F&& f, double a, double b) const {
        double mid = 0.5 * (a + b);
        double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k)
            sum += weights[k] * f(mid + half * nodes[k]);
        return half * sum;
    }
};

namespace detail {

// Breakpoints for the pre-split mesh: uniform width scale/4 across the
// refinement zone plus a geometric cascade onto the point itself.
inline void refine_breakpoints(double a, double b, const RefinePoint1D& rp,
                               std::vector<double>& out) {
    double l = rp.scale;
    if (l <= 0.0) throw InputError("refinement length-scale must be > 0");
    double zlo = std::max(a, rp.location - 12.0 * l);
    double zhi = std::min(b, rp.location + 12.0 * l);
    if (zlo >= zhi) return;
    double step = 0.25 * l;
    long nsteps = std::lround(std::ceil((zhi - zlo) / step));
    nsteps = std::min(nsteps, 4000L);
    for (long k = 0; k <= nsteps; ++k) out.push_back(zlo + (zhi - zlo) * k / nsteps);
    // Geometric grading within one length-scale of the point.
    for (int k = 1; k <= 52; ++k) {
        double off = l * std::ldexp(1.0, -k);
        if (rp.location + off > a && rp.location + off < b) out.push_back(rp.location + off);
        if (rp.location - off > a && rp.location - off < b) out.push_back(rp.location - off);
    }
    if (rp.location > a && rp.location < b) out.push_back(rp.location);
}

template <typename F>
double adapt_panel(F& f, const GaussRule& rule, double a, double b, double coarse,
                   double local_tol, double floor_tol, int depth, const QuadratureSpec& spec) {
    double mid = 0.5 * (a + b);
    double left = rule.apply(f, a, mid);
    double right = rule.apply(f, mid, b);
    double fine = left + right;
    double err = std::abs(fine - coarse);
    if (err <= std::max(local_tol, floor_tol) || b - a < 1e-15 * std::abs(mid) + 1e-300)
        return fine;
    if (depth >= spec.max_depth)
        throw QuadratureError("quadrature: max_depth exceeded", fine, err);
    return adapt_panel(f, rule, a, mid, left, 0.5 * local_tol, floor_tol, depth + 1, spec) +
           adapt_panel(f, rule, mid, b, right, 0.5 * local_tol, floor_tol, depth + 1, spec);
}

}  // namespace detail

template <typename F>
double integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec,
                    const std::vector<RefinePoint1D>& refine = {}) {
    spec.validate();
    if (b <= a) return 0.0;
    std::vector<double> pts{a, b};
    for (const RefinePoint1D& rp : refine) detail::refine_breakpoints(a, b, rp, pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double u, double v) { return v - u < 1e-15 * (b - a); }),
              pts.end());
    pts.back() = b;

    GaussRule rule(spec.base_order);
    std::vector<double> coarse(pts.size() - 1);
    double estimate = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        coarse[k] = rule.apply(f, pts[k], pts[k + 1]);
        estimate += coarse[k];
    }
    double total_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(estimate));
    double floor_tol = 1e-3 * total_tol;
    double result = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double frac = (pts[k + 1] - pts[k]) / (b - a);
        result += detail::adapt_panel(f, rule, pts[k], pts[k + 1], coarse[k], total_tol * frac,
                                      floor_tol, 0, spec);
    }
    return result;
}

// Line integral along a segment with respect to arclength.
template <typename F>
double integrate_segment(F&& f, Vec2 p0, Vec2 p1, const QuadratureSpec& spec,
                         const std::vector<RefinePoint2D>& refine = {}) {
    double len = norm(p1 - p0);
    if (len == 0.0) return 0.0;
    std::vector<RefinePoint1D> refine1d;
    Vec2 dir = (1.0 / len) * (p1 - p0);
    for (const RefinePoint2D& rp : refine) {
        double t = dot(rp.location - p0, dir);
        if (t > -12.0 * rp.scale && t < len + 12.0 * rp.scale)
            refine1d.push_back({std::clamp(t, 0.0, len), rp.scale});
    }
    return integrate_1d([&](double t) { return f(p0 + t * dir); }, 0.0, len, spec, refine1d);
}

namespace detail {

struct Tri {
    Vec2 a, b, c;
    double area() const { return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)); }
    double diameter() const { return std::max({norm(b - a), norm(c - b), norm(a - c)}); }
};

// Tensorized Gauss-Legendre on a triangle via the Duffy (collapsed square)
// map; exact jacobian, deterministic.
template <typename F>
double tri_quad(F& f, const GaussRule& rule, const Tri& t) {
    double sum = 0.0;
    double twoA = 2.0 * t.area();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double u = 0.5 * (rule.nodes[i] + 1.0);
        double wu = 0.5 * rule.weights[i];
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            double v = 0.5 * (rule.nodes[j] + 1.0);
            double wv = 0.5 * rule.weights[j];
            // (x, y) = a + u*(b-a) + u*v*(c-b); jacobian = 2*Area*u
            Vec2 p = t.a + u * (t.b - t.a) + (u * v) * (t.c - t.b);
            sum += wu * wv * twoA * u * f(p);
        }
    }
    return sum;
}

inline double tri_refine_distance(const Tri& t, Vec2 p) {
    // Zero when inside, else distance to the nearest edge.
    auto side = [&](Vec2 a, Vec2 b) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };
    if (side(t.a, t.b) >= 0 && side(t.b, t.c) >= 0 && side(t.c, t.a) >= 0) return 0.0;
    if (side(t.a, t.b) <= 0 && side(t.b, t.c) <= 0 && side(t.c, t.a) <= 0) return 0.0;
    return std::min({point_segment_distance(p, t.a, t.b), point_segment_distance(p, t.b, t.c),
                     point_segment_distance(p, t.c, t.a)});
}

template <typename F>
double adapt_tri(F& f, const GaussRule& rule, const Tri& t, double coarse, double local_tol,
                 double floor_tol, int depth, const QuadratureSpec& spec,
                 const std::vector<RefinePoint2D>& refine) {
    bool forced = false;
    for (const RefinePoint2D& rp : refine) {
        if (t.diameter() > 4.0 * rp.scale && tri_refine_distance(t, rp.location) <= 12.0 * rp.scale) {
            forced = true;
            break;
        }
    }
    Vec2 mab = 0.5 * (t.a + t.b), mbc = 0.5 * (t.b + t.c), mca = 0.5 * (t.c + t.a);
    Tri kids[4] = {{t.a, mab, mca}, {mab, t.b, mbc}, {mca, mbc, t.c}, {mab, mbc, mca}};
    double fine = 0.0;
    double kid_coarse[4];
    for (int k = 0; k < 4; ++k) {
        kid_coarse[k] = tri_quad(f, rule, kids[k]);
        fine += kid_coarse[k];
    }
    double err = std::abs(fine - coarse);
    if (!forced && (err <= std::max(local_tol, floor_tol) || t.diameter() < 1e-14))
        return fine;
    if (depth >= spec.max_depth) {
        if (forced) return fine;  // forced split bottomed out; estimate is converged
        throw QuadratureError("polygon quadrature: max_depth exceeded", fine, err);
    }
    double out = 0.0;
    for (int k = 0; k < 4; ++k)
        out += adapt_tri(f, rule, kids[k], kid_coarse[k], 0.25 * local_tol, floor_tol, depth + 1,
                         spec, refine);
    return out;
}

}  // namespace detail

template <typename F>
double integrate_polygon(F&& f, const Polygon& poly, const QuadratureSpec& spec,
                         const std::vector<RefinePoint2D>& refine = {}) {
    spec.validate();
    if (poly.size() < 3) return 0.0;
    GaussRule rule(spec.base_order);
    Vec2 c = polygon_centroid(poly);
    std::vector<detail::Tri> tris;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        detail::Tri t{c, poly[k], poly[(k + 1) % poly.size()]};
        if (t.area() > 1e-24) tris.push_back(t);
    }
    double total_area = 0.0, estimate = 0.0;
    std::vector<double> coarse(tris.size());
    for (std::size_t k = 0; k < tris.size(); ++k) {
        coarse[k] = detail::tri_quad(f, rule, tris[k]);
        estimate += coarse[k];
        total_area += tris[k].area();
    }
    double total_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(estimate));
    double floor_tol = 1e-3 * total_tol;
    double result = 0.0;
    for (std::size_t k = 0; k < tris.size(); ++k)
        result += detail::adapt_tri(f, rule, tris[k], coarse[k],
                                    total_tol * tris[k].area() / total_area, floor_tol, 0, spec,
                                    refine);
    return result;
}

}  // namespace sdot
