// SPDX-License-Identifier: MIT
//
// Brute-force verification path: midpoint-grid discretization of a 1D source
// density plus dense log-domain Sinkhorn on the resulting discrete instance.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sdot/density.hpp"
#include "sdot/errors.hpp"
#include "sdot/problem.hpp"
#include "sdot/quadrature.hpp"
#include "sdot/solver.hpp"

namespace sdot {

struct DiscreteProblem {
    std::vector<double> grid;     // midpoints x_k
    std::vector<double> mu;       // cell masses, renormalized to sum 1
    Atoms atoms;
    double eta = 0.0;

    double cost_entry(int k, int j) const {
        return norm2(Vec2{grid[k], 0.0} - atoms.positions[j]);
    }
};

inline DiscreteProblem discretize(const Density& density, int N, const Atoms& atoms, double eta,
                                  const QuadratureSpec& spec = {}) {
    if (density.dim() != 1) throw InputError("discretize: oracle is 1D-only");
    if (N < 2) throw InputError("discretize: N must be >= 2");
    DiscreteProblem dp;
    dp.atoms = atoms;
    dp.eta = eta;
    Interval sup = density.support();
    double width = sup.length() / N;
    double total = 0.0;
    for (int k = 0; k < N; ++k) {
        double lo = sup.lo + k * width;
        dp.grid.push_back(lo + 0.5 * width);
        double mass = integrate_1d([&](double x) { return density(x); }, lo, lo + width, spec,
                                   density.refinements());
        dp.mu.push_back(mass);
        total += mass;
    }
    for (double& m : dp.mu) m /= total;
    return dp;
}

struct OracleResult {
    double cost = 0.0;
    double kl_rho = 0.0;        // KL against mu_N x rho (counting measure)
    std::vector<double> g;      // nu-side potential, E_nu[g] = 0
    double marginal_residual = 0.0;
    int iterations = 0;
};

inline OracleResult dense_sinkhorn(const DiscreteProblem& dp, double tol, int max_iter = 100000) {
    const int N = static_cast<int>(dp.grid.size());
    const int n = dp.atoms.n();
    const double eta = dp.eta;
    const std::vector<double>& nu = dp.atoms.weights;
    std::vector<double> g(n, 0.0), f(N, 0.0), m(n);
    std::vector<double> logmu(N);
    for (int k = 0; k < N; ++k) logmu[k] = std::log(dp.mu[k]);

    OracleResult out;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= max_iter; ++it) {
        // f-step in closed form: unit row sums of exp(-eta (C - f - g)).
        for (int k = 0; k < N; ++k) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j)
                mx = std::max(mx, -eta * (dp.cost_entry(k, j) - g[j]));
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::exp(-eta * (dp.cost_entry(k, j) - g[j]) - mx);
            f[k] = -(mx + std::log(s)) / eta;
        }
        residual = 0.0;
        for (int j = 0; j < n; ++j) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < N; ++k)
                mx = std::max(mx, logmu[k] - eta * (dp.cost_entry(k, j) - f[k] - g[j]));
            double s = 0.0;
            for (int k = 0; k < N; ++k)
                s += std::exp(logmu[k] - eta * (dp.cost_entry(k, j) - f[k] - g[j]) - mx);
            m[j] = std::exp(mx) * s;
            residual = std::max(residual, std::abs(std::log(m[j] / nu[j])));
        }
        out.iterations = it;
        if (residual <= tol) break;
        if (it == max_iter) throw ConvergenceError("dense_sinkhorn: iteration cap exceeded", residual);
        for (int j = 0; j < n; ++j) g[j] += (std::log(nu[j]) - std::log(m[j])) / eta;
    }

    double cost = 0.0, ef = 0.0, eg = 0.0;
    for (int k = 0; k < N; ++k) {
        ef += dp.mu[k] * f[k];
        for (int j = 0; j < n; ++j) {
            double c = dp.cost_entry(k, j);
            cost += dp.mu[k] * std::exp(-eta * (c - f[k] - g[j])) * c;
        }
    }
    for (int j = 0; j < n; ++j) eg += nu[j] * g[j];
    out.cost = cost;
    out.kl_rho = eta * (ef + eg - cost);
    shift_to_zero_mean(g, nu);
    out.g = std::move(g);
    out.marginal_residual = residual;
    return out;
}

}  // namespace sdot
