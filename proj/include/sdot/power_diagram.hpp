// SPDX-License-Identifier: MIT
//
// Power diagrams (Laguerre cells) for a weight vector g, cell masses, slacks
// and facet density integrals w_ij = h_ij(0).
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "sdot/density.hpp"
#include "sdot/errors.hpp"
#include "sdot/geometry.hpp"
#include "sdot/problem.hpp"
#include "sdot/quadrature.hpp"

namespace sdot {

struct Facet {
    // 1D: a == b == breakpoint; 2D: separating segment.
    Vec2 a;
    Vec2 b;
};

struct PowerDiagram {
    Atoms atoms;
    std::vector<double> g;
    int dim = 1;
    std::vector<Interval> cells1d;           // dim == 1; empty() marks an empty cell
    std::vector<bool> empty1d;
    std::vector<Polygon> cells2d;            // dim == 2; empty polygon == empty cell
    std::map<std::pair<int, int>, Facet> facets;  // keyed i < j

    bool cell_empty(int i) const { return dim == 1 ? empty1d[i] : cells2d[i].empty(); }

    const Facet* facet(int i, int j) const {
        auto it = facets.find(std::minmax(i, j));
        return it == facets.end() ? nullptr : &it->second;
    }
};

// Dual-constraint slack Delta_ij(x), affine in x; valid for any weight
// vector, not just the optimal one.
inline double slack(const PowerDiagram& d, int i, int j, Vec2 x) {
    const Vec2& yi = d.atoms.positions[i];
    const Vec2& yj = d.atoms.positions[j];
    return 2.0 * dot(x, yi - yj) - norm2(yi) + norm2(yj) - d.g[j] + d.g[i];
}

namespace detail {

inline double breakpoint_1d(double yi, double yj, double gi, double gj) {
    return (yj * yj - yi * yi - gj + gi) / (2.0 * (yj - yi));
}

inline void build_1d(PowerDiagram& d, const Density& density) {
    int n = d.atoms.n();
    Interval sup = density.support();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return d.atoms.positions[a].x < d.atoms.positions[b].x;
    });
    d.cells1d.assign(n, {});
    d.empty1d.assign(n, false);
    for (int i = 0; i < n; ++i) {
        double yi = d.atoms.positions[i].x;
        double lo = sup.lo, hi = sup.hi;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double yj = d.atoms.positions[j].x;
            double b = breakpoint_1d(yi, yj, d.g[i], d.g[j]);
            if (yj > yi)
                hi = std::min(hi, b);
            else
                lo = std::max(lo, b);
        }
        d.cells1d[i] = {lo, hi};
        d.empty1d[i] = lo > hi + 1e-14;
        if (d.empty1d[i]) d.cells1d[i] = {lo, lo};
    }
    // Facets sit between consecutive nonempty cells (breakpoints on the
    // support boundary included; the density contributes its one-sided limit
    // there).
    int prev = -1;
    for (int k = 0; k < n; ++k) {
        int i = order[k];
        if (d.empty1d[i]) continue;
        if (prev >= 0) {
            double t = 0.5 * (d.cells1d[prev].hi + d.cells1d[i].lo);
            Vec2 p{t, 0.0};
            d.facets[std::minmax(prev, i)] = Facet{p, p};
        }
        prev = i;
    }
}

inline void build_2d(PowerDiagram& d, const Density& density) {
    int n = d.atoms.n();
    const Polygon& sup = density.support_polygon();
    d.cells2d.assign(n, {});
    for (int i = 0; i < n; ++i) {
        Polygon cell = sup;
        const Vec2& yi = d.atoms.positions[i];
        for (int j = 0; j < n && !cell.empty(); ++j) {
            if (j == i) continue;
            const Vec2& yj = d.atoms.positions[j];
            // x in S_i  <=>  2<x, yj - yi> <= |yj|^2 - |yi|^2 - g_j + g_i
            cell = clip_halfplane(cell, 2.0 * (yj - yi), norm2(yj) - norm2(yi) - d.g[j] + d.g[i]);
        }
        d.cells2d[i] = std::move(cell);
    }
    for (int i = 0; i < n; ++i) {
        if (d.cells2d[i].empty()) continue;
        for (int j = i + 1; j < n; ++j) {
            if (d.cells2d[j].empty()) continue;
            const Vec2& yi = d.atoms.positions[i];
            const Vec2& yj = d.atoms.positions[j];
            Vec2 nrm = 2.0 * (yj - yi);
            double c = norm2(yj) - norm2(yi) - d.g[j] + d.g[i];
            auto chord_i = polygon_line_chord(d.cells2d[i], nrm, c);
            auto chord_j = polygon_line_chord(d.cells2d[j], nrm, c);
            if (!chord_i || !chord_j) continue;
            // Intersect the two chords along the line to kill clipping noise.
            Vec2 dir{-nrm.y, nrm.x};
            double lo = std::max(std::min(dot(dir, chord_i->a), dot(dir, chord_i->b)),
                                 std::min(dot(dir, chord_j->a), dot(dir, chord_j->b)));
            double hi = std::min(std::max(dot(dir, chord_i->a), dot(dir, chord_i->b)),
                                 std::max(dot(dir, chord_j->a), dot(dir, chord_j->b)));
            if (hi - lo < 1e-12 * norm(dir)) continue;
            Vec2 base = chord_i->a;
            double d0 = dot(dir, base);
            double inv = 1.0 / norm2(dir);
            Facet f{base + ((lo - d0) * inv) * dir, base + ((hi - d0) * inv) * dir};
            if (f.b.x < f.a.x || (f.b.x == f.a.x && f.b.y < f.a.y)) std::swap(f.a, f.b);
            if (norm(f.b - f.a) >= 1e-12) d.facets[{i, j}] = f;
        }
    }
}

}  // namespace detail

inline PowerDiagram build_diagram(const Atoms& atoms, const std::vector<double>& g,
                                  const Density& density) {
    atoms.validate();
    if (static_cast<int>(g.size()) != atoms.n())
        throw InputError("build_diagram: weight vector length must equal atom count");
    PowerDiagram d;
    d.atoms = atoms;
    d.g = g;
    d.dim = density.dim();
    if (d.dim == 1)
        detail::build_1d(d, density);
    else
        detail::build_2d(d, density);
    return d;
}

inline double cell_mass(const PowerDiagram& d, const Density& density, int i,
                        const QuadratureSpec& spec) {
    if (d.cell_empty(i)) return 0.0;
    if (d.dim == 1) {
        const Interval& c = d.cells1d[i];
        return integrate_1d([&](double x) { return density(x); }, c.lo, c.hi, spec,
                            density.refinements());
    }
    return integrate_polygon([&](Vec2 p) { return density(p); }, d.cells2d[i], spec);
}

inline std::vector<double> cell_masses(const PowerDiagram& d, const Density& density,
                                       const QuadratureSpec& spec) {
    std::vector<double> m(d.atoms.n());
    for (int i = 0; i < d.atoms.n(); ++i) m[i] = cell_mass(d, density, i, spec);
    return m;
}

// Facet density integral w_ij = h_ij(0). Symmetric by construction: the
// facet is stored once per unordered pair.
inline double facet_weight(const PowerDiagram& d, const Density& density, int i, int j,
                           const QuadratureSpec& spec) {
    if (i == j) throw InputError("facet_weight: i must differ from j");
    const Facet* f = d.facet(i, j);
    if (!f) return 0.0;
    if (d.dim == 1) return density.closure_value(f->a.x);
    return integrate_segment([&](Vec2 p) { return density(p); }, f->a, f->b, spec);
}

struct FacetWeights {
    int n = 0;
    std::map<std::pair<int, int>, double> w;  // keyed i < j

    double operator()(int i, int j) const {
        if (i == j) throw InputError("facet weights: diagonal is undefined");
        auto it = w.find(std::minmax(i, j));
        return it == w.end() ? 0.0 : it->second;
    }
};

inline FacetWeights all_facet_weights(const PowerDiagram& d, const Density& density,
                                      const QuadratureSpec& spec) {
    FacetWeights fw;
    fw.n = d.atoms.n();
    for (const auto& [key, facet] : d.facets)
        fw.w[key] = facet_weight(d, density, key.first, key.second, spec);
    return fw;
}

struct Connectivity {
    bool connected = true;
    std::vector<int> labels;
};

// Union-find connectivity of the graph with edges {w_ij > threshold}.
// Disconnection is a diagnostic (Assumption-1 violation), not an error.
inline Connectivity adjacency_connected(const FacetWeights& fw, double threshold = 0.0) {
    std::vector<int> parent(fw.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& [key, weight] : fw.w)
        if (weight > threshold) parent[find(key.first)] = find(key.second);
    Connectivity c;
    c.labels.resize(fw.n);
    std::map<int, int> relabel;
    for (int i = 0; i < fw.n; ++i) {
        int r = find(i);
        auto [it, fresh] = relabel.try_emplace(r, static_cast<int>(relabel.size()));
        c.labels[i] = it->second;
    }
    c.connected = relabel.size() <= 1;
    return c;
}

}  // namespace sdot
