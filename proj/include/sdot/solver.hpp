// SPDX-License-Identifier: MIT
//
// Unregularized semi-discrete solver: damped Newton maximization of the
// concave Kantorovich dual, squared Wasserstein distance and transport map.
// 1D problems also have an exact quantile construction used as a cross-check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sdot/errors.hpp"
#include "sdot/power_diagram.hpp"
#include "sdot/problem.hpp"

namespace sdot {

struct DualSolution {
    std::vector<double> g;      // E_nu[g] = 0
    double w2_squared = 0.0;
    PowerDiagram diagram;       // at the optimal g
    double residual = 0.0;      // max_j |mass(S_j) - nu_j|
    int iterations = 0;
};

inline void shift_to_zero_mean(std::vector<double>& g, const std::vector<double>& nu) {
    double mean = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) mean += nu[j] * g[j];
    for (double& v : g) v -= mean;
}

// Kantorovich dual objective F(g) = sum_j nu_j g_j + int min_j(|x-y_j|^2 - g_j) dmu.
inline double dual_objective(const Problem& problem, const std::vector<double>& g,
                             const QuadratureSpec& spec) {
    PowerDiagram d = build_diagram(problem.atoms, g, problem.density);
    double value = 0.0;
    for (int j = 0; j < problem.atoms.n(); ++j) value += problem.atoms.weights[j] * g[j];
    for (int i = 0; i < problem.atoms.n(); ++i) {
        if (d.cell_empty(i)) continue;
        const Vec2 yi = problem.atoms.positions[i];
        auto f = [&](Vec2 p) { return (norm2(p - yi) - g[i]) * problem.density(p); };
        if (d.dim == 1)
            value += integrate_1d([&](double x) { return f({x, 0.0}); }, d.cells1d[i].lo,
                                  d.cells1d[i].hi, spec, problem.density.refinements());
        else
            value += integrate_polygon(f, d.cells2d[i], spec);
    }
    return value;
}

inline double w2_squared(const Problem& problem, const PowerDiagram& d,
                         const QuadratureSpec& spec) {
    double value = 0.0;
    for (int i = 0; i < problem.atoms.n(); ++i) {
        if (d.cell_empty(i)) continue;
        const Vec2 yi = problem.atoms.positions[i];
        auto f = [&](Vec2 p) { return norm2(p - yi) * problem.density(p); };
        if (d.dim == 1)
            value += integrate_1d([&](double x) { return f({x, 0.0}); }, d.cells1d[i].lo,
                                  d.cells1d[i].hi, spec, problem.density.refinements());
        else
            value += integrate_polygon(f, d.cells2d[i], spec);
    }
    return value;
}

inline int transport_map(const DualSolution& sol, Vec2 x) {
    int best = 0;
    double best_val = norm2(x - sol.diagram.atoms.positions[0]) - sol.g[0];
    for (int j = 1; j < sol.diagram.atoms.n(); ++j) {
        double v = norm2(x - sol.diagram.atoms.positions[j]) - sol.g[j];
        if (v < best_val - 0.0) {  // ties resolve to the lowest index
            best_val = v;
            best = j;
        }
    }
    return best;
}

inline DualSolution solve_unregularized(const Problem& problem, double tol,
                                        const QuadratureSpec& spec, int max_iter = 200) {
    problem.validate();
    const int n = problem.atoms.n();
    const std::vector<double>& nu = problem.atoms.weights;
    std::vector<double> g(n, 0.0);

    PowerDiagram diagram = build_diagram(problem.atoms, g, problem.density);
    std::vector<double> mass = cell_masses(diagram, problem.density, spec);
    auto residual_of = [&](const std::vector<double>& m) {
        double r = 0.0;
        for (int j = 0; j < n; ++j) r = std::max(r, std::abs(m[j] - nu[j]));
        return r;
    };
    double residual = residual_of(mass);
    int iter = 0;

    double nu_min = *std::min_element(nu.begin(), nu.end());
    while (residual > tol) {
        if (++iter > max_iter)
            throw ConvergenceError("solve_unregularized: damped Newton did not converge", residual);

        // Hessian of F: off-diagonal w_ij / (2|y_i - y_j|), diagonal = -row sums.
        FacetWeights fw = all_facet_weights(diagram, problem.density, spec);
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (const auto& [key, wij] : fw.w) {
            auto [i, j] = key;
            double h = wij / (2.0 * norm(problem.atoms.positions[i] - problem.atoms.positions[j]));
            kkt(i, j) += h;
            kkt(j, i) += h;
            kkt(i, i) -= h;
            kkt(j, j) -= h;
        }
        Eigen::VectorXd rhs(n + 1);
        for (int j = 0; j < n; ++j) {
            kkt(n, j) = kkt(j, n) = nu[j];
            rhs(j) = -(nu[j] - mass[j]);  // -grad F
        }
        rhs(n) = 0.0;
        Eigen::VectorXd step = kkt.fullPivLu().solve(rhs);
        if (!step.allFinite())
            throw ConvergenceError("solve_unregularized: singular Newton system", residual);

        // Damping: halve until no cell mass drops below half the smaller of
        // the current minimum mass and the smallest target weight.
        double floor = 0.5 * std::min(*std::min_element(mass.begin(), mass.end()), nu_min);
        double t = 1.0;
        std::vector<double> g_try(n), mass_try;
        PowerDiagram diagram_try;
        for (;; t *= 0.5) {
            if (t < 1e-10)
                throw ConvergenceError("solve_unregularized: empty cell could not be re-inflated",
                                       residual);
            for (int j = 0; j < n; ++j) g_try[j] = g[j] + t * step(j);
            diagram_try = build_diagram(problem.atoms, g_try, problem.density);
            mass_try = cell_masses(diagram_try, problem.density, spec);
            if (*std::min_element(mass_try.begin(), mass_try.end()) >= floor) break;
        }
        g = g_try;
        diagram = std::move(diagram_try);
        mass = std::move(mass_try);
        residual = residual_of(mass);
    }

    shift_to_zero_mean(g, nu);
    DualSolution sol;
    sol.g = g;
    sol.diagram = build_diagram(problem.atoms, g, problem.density);
    sol.residual = residual;
    sol.iterations = iter;
    sol.w2_squared = w2_squared(problem, sol.diagram, spec);
    return sol;
}

// Exact 1D construction: breakpoints are mu-quantiles at the cumulative
// target weights; g follows from telescoping the breakpoint relation.
inline std::vector<double> quantile_potentials_1d(const Problem& problem) {
    problem.validate();
    if (problem.dim() != 1) throw InputError("quantile_potentials_1d: 1D densities only");
    const int n = problem.atoms.n();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return problem.atoms.positions[a].x < problem.atoms.positions[b].x;
    });
    std::vector<double> g(n, 0.0);
    double cum = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
        cum += problem.atoms.weights[order[k]];
        double b = problem.density.quantile(cum);
        double yi = problem.atoms.positions[order[k]].x;
        double yj = problem.atoms.positions[order[k + 1]].x;
        // b = (yj^2 - yi^2 - g_j + g_i) / (2 (yj - yi))
        g[order[k + 1]] = g[order[k]] + yj * yj - yi * yi - 2.0 * b * (yj - yi);
    }
    shift_to_zero_mean(g, problem.atoms.weights);
    return g;
}

}  // namespace sdot
