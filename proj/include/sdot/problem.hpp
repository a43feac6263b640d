// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sdot/density.hpp"
#include "sdot/errors.hpp"
#include "sdot/geometry.hpp"

namespace sdot {

// Discrete target: atoms y_i with weights nu_i > 0 summing to 1.
struct Atoms {
    std::vector<Vec2> positions;
    std::vector<double> weights;

    int n() const { return static_cast<int>(positions.size()); }

    void validate() const {
        if (positions.empty()) throw InputError("atoms: at least one atom required");
        if (positions.size() != weights.size())
            throw InputError("atoms: positions/weights size mismatch");
        double sum = 0.0;
        for (double w : weights) {
            if (w <= 0.0) throw InputError("atoms: weights must be > 0");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw InputError("atoms: weights must sum to 1");
        for (std::size_t i = 0; i < positions.size(); ++i)
            for (std::size_t j = i + 1; j < positions.size(); ++j)
                if (norm2(positions[i] - positions[j]) < 1e-24)
                    throw InputError("atoms: positions must be pairwise distinct");
    }
};

inline Atoms atoms_1d(const std::vector<double>& xs, const std::vector<double>& ws) {
    Atoms a;
    for (double x : xs) a.positions.push_back({x, 0.0});
    a.weights = ws;
    a.validate();
    return a;
}

// Semi-discrete transport instance: absolutely continuous source, atomic
// target.
struct Problem {
    Density density;
    Atoms atoms;

    int dim() const { return density.dim(); }

    void validate() const {
        atoms.validate();
        if (density.dim() == 1)
            for (const Vec2& p : atoms.positions)
                if (p.y != 0.0) throw InputError("problem: 1D atoms must have zero y-coordinate");
    }
};

inline double shannon_entropy(const std::vector<double>& weights) {
    double h = 0.0;
    for (double w : weights)
        if (w > 0.0) h -= w * std::log(w);
    return h;
}

}  // namespace sdot
