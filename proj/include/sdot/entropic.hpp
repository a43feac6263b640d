// SPDX-License-Identifier: MIT
//
// Semi-discrete Sinkhorn solver (log-domain) and the derived quantities:
// entropic cost, slack-decomposition suboptimality, KL terms, the scaled
// dual gap d_eta = eta (g_eta - g*) and the auxiliary objective Phi(eta).
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "sdot/errors.hpp"
#include "sdot/power_diagram.hpp"
#include "sdot/problem.hpp"
#include "sdot/solver.hpp"

namespace sdot {

// Soft dual potential f_eta(x) = -(1/eta) log sum_j exp(-eta (|x-y_j|^2 - g_j));
// converges to min_j (|x-y_j|^2 - g_j) as eta -> infinity.
inline double soft_potential(const Atoms& atoms, const std::vector<double>& g, double eta,
                             Vec2 x) {
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < atoms.n(); ++j)
        m = std::max(m, -eta * (norm2(x - atoms.positions[j]) - g[j]));
    double sum = 0.0;
    for (int j = 0; j < atoms.n(); ++j)
        sum += std::exp(-eta * (norm2(x - atoms.positions[j]) - g[j]) - m);
    return -(m + std::log(sum)) / eta;
}

// Softmax row of the conditional coupling pi_eta(y_j | x); sums to 1 exactly.
inline void conditional_weights(const Atoms& atoms, const std::vector<double>& g, double eta,
                                Vec2 x, std::vector<double>& out) {
    out.resize(atoms.n());
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < atoms.n(); ++j) {
        out[j] = -eta * (norm2(x - atoms.positions[j]) - g[j]);
        m = std::max(m, out[j]);
    }
    double sum = 0.0;
    for (double& v : out) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : out) v /= sum;
}

inline double conditional(const Atoms& atoms, const std::vector<double>& g, double eta, Vec2 x,
                          int j) {
    std::vector<double> w;
    conditional_weights(atoms, g, eta, x, w);
    return w[j];
}

struct EntropicSolution {
    double eta = 0.0;
    std::vector<double> g;            // E_nu[g] = 0
    double marginal_residual = 0.0;   // max_j |log(m_j / nu_j)|
    int iterations = 0;
};

namespace detail {

// Refinement points at the unregularized facet locations, length-scale 1/eta.
inline std::vector<RefinePoint1D> facet_refinements_1d(const PowerDiagram& d, double scale) {
    std::vector<RefinePoint1D> r;
    for (const auto& [key, f] : d.facets) r.push_back({f.a.x, scale});
    return r;
}

inline std::vector<RefinePoint2D> facet_refinements_2d(const PowerDiagram& d, double scale) {
    std::vector<RefinePoint2D> r;
    for (const auto& [key, f] : d.facets) {
        double len = norm(f.b - f.a);
        int steps = std::max(1, static_cast<int>(std::ceil(len / (8.0 * scale))));
        for (int k = 0; k <= steps; ++k)
            r.push_back({f.a + (static_cast<double>(k) / steps) * (f.b - f.a), scale});
    }
    return r;
}

template <typename F>
double integrate_support(const Problem& pb, const PowerDiagram& facet_source, double eta, F&& f,
                         const QuadratureSpec& spec) {
    if (pb.dim() == 1) {
        std::vector<RefinePoint1D> refine = pb.density.refinements();
        auto fr = facet_refinements_1d(facet_source, 1.0 / eta);
        refine.insert(refine.end(), fr.begin(), fr.end());
        Interval sup = pb.density.support();
        return integrate_1d([&](double x) { return f(Vec2{x, 0.0}); }, sup.lo, sup.hi, spec,
                            refine);
    }
    return integrate_polygon(f, pb.density.support_polygon(), spec,
                             facet_refinements_2d(facet_source, 1.0 / eta));
}

template <typename F>
double integrate_cell(const Problem& pb, const PowerDiagram& d, int i, double eta, F&& f,
                      const QuadratureSpec& spec) {
    if (d.cell_empty(i)) return 0.0;
    if (pb.dim() == 1) {
        std::vector<RefinePoint1D> refine = pb.density.refinements();
        auto fr = facet_refinements_1d(d, 1.0 / eta);
        refine.insert(refine.end(), fr.begin(), fr.end());
        return integrate_1d([&](double x) { return f(Vec2{x, 0.0}); }, d.cells1d[i].lo,
                            d.cells1d[i].hi, spec, refine);
    }
    return integrate_polygon(f, d.cells2d[i], spec, facet_refinements_2d(d, 1.0 / eta));
}

}  // namespace detail

// Log-domain Sinkhorn fixed point for the semi-discrete entropic dual.
// Warm-start with `warm` (e.g. the solution at the previous eta in a sweep);
// otherwise starts from g*.
inline EntropicSolution sinkhorn_solve(const Problem& problem, const DualSolution& dual,
                                       double eta, double tol, const QuadratureSpec& spec,
                                       const std::vector<double>* warm = nullptr,
                                       int max_iter = 100000) {
    problem.validate();
    if (eta <= 0.0) throw InputError("sinkhorn_solve: eta must be > 0");
    const int n = problem.atoms.n();
    const std::vector<double>& nu = problem.atoms.weights;
    std::vector<double> g = warm ? *warm : dual.g;

    EntropicSolution sol;
    sol.eta = eta;
    std::vector<double> cond, m(n);
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= max_iter; ++it) {
        for (int j = 0; j < n; ++j) {
            m[j] = detail::integrate_support(
                problem, dual.diagram, eta,
                [&](Vec2 x) {
                    conditional_weights(problem.atoms, g, eta, x, cond);
                    return cond[j] * problem.density(x);
                },
                spec);
            m[j] = std::max(m[j], 1e-300);
        }
        residual = 0.0;
        for (int j = 0; j < n; ++j) residual = std::max(residual, std::abs(std::log(m[j] / nu[j])));
        sol.iterations = it;
        if (residual <= tol) break;
        if (it == max_iter)
            throw ConvergenceError("sinkhorn_solve: iteration cap exceeded", residual);
        for (int j = 0; j < n; ++j) g[j] += (std::log(nu[j]) - std::log(m[j])) / eta;
    }
    shift_to_zero_mean(g, nu);  // conditionals are shift-invariant, residual unchanged
    sol.g = std::move(g);
    sol.marginal_residual = residual;
    return sol;
}

// E_{pi_eta}[|x - y|^2].
inline double entropic_transport_cost(const Problem& problem, const DualSolution& dual,
                                      const EntropicSolution& sol, const QuadratureSpec& spec) {
    std::vector<double> cond;
    return detail::integrate_support(
        problem, dual.diagram, sol.eta,
        [&](Vec2 x) {
            conditional_weights(problem.atoms, sol.g, sol.eta, x, cond);
            double v = 0.0;
            for (int j = 0; j < problem.atoms.n(); ++j)
                v += cond[j] * norm2(x - problem.atoms.positions[j]);
            return v * problem.density(x);
        },
        spec);
}

struct KlReport {
    double cost = 0.0;               // E_{pi_eta}[|x - y|^2]
    double kl_mu_rho = 0.0;          // KL(pi_eta | mu x rho), rho counting measure
    double kl_mu_nu = 0.0;           // = kl_mu_rho + H(nu)
    double entropic_cost_rho = 0.0;  // cost + kl_mu_rho / eta
    double entropic_cost_nu = 0.0;   // cost + kl_mu_nu / eta
};

// KL terms computed from the conditional entropy; cross-checked against the
// duality identity entropic_cost_rho = E_mu[f_eta].
inline KlReport kl_and_entropic_cost(const Problem& problem, const DualSolution& dual,
                                     const EntropicSolution& sol, const QuadratureSpec& spec,
                                     std::optional<double> precomputed_cost = std::nullopt) {
    KlReport r;
    r.cost = precomputed_cost ? *precomputed_cost
                              : entropic_transport_cost(problem, dual, sol, spec);
    std::vector<double> cond;
    r.kl_mu_rho = detail::integrate_support(
        problem, dual.diagram, sol.eta,
        [&](Vec2 x) {
            conditional_weights(problem.atoms, sol.g, sol.eta, x, cond);
            double v = 0.0;
            for (double c : cond)
                if (c > 0.0) v += c * std::log(c);
            return v * problem.density(x);
        },
        spec);
    r.kl_mu_nu = r.kl_mu_rho + shannon_entropy(problem.atoms.weights);
    r.entropic_cost_rho = r.cost + r.kl_mu_rho / sol.eta;
    r.entropic_cost_nu = r.cost + r.kl_mu_nu / sol.eta;

    double e_mu_f = detail::integrate_support(
        problem, dual.diagram, sol.eta,
        [&](Vec2 x) {
            return soft_potential(problem.atoms, sol.g, sol.eta, x) * problem.density(x);
        },
        spec);
    double tol = 1e-8 * std::max(1.0, std::abs(r.entropic_cost_rho)) +
                 10.0 * (spec.abs_tol + spec.rel_tol * (std::abs(r.cost) + std::abs(e_mu_f))) +
                 10.0 * sol.marginal_residual;
    if (std::abs(r.entropic_cost_rho - e_mu_f) > tol)
        throw ConsistencyError("kl_and_entropic_cost: duality identity violated");
    return r;
}

// Suboptimality from the nonnegative slack decomposition
// sum_{i != j} int_{S_i} Delta_ij(x) dpi(x, y_j); the direct difference
// cost - W2^2 is kept as a consistency check (it cancels catastrophically at
// large eta, so the decomposition is the reported value).
inline double suboptimality(const Problem& problem, const DualSolution& dual,
                            const EntropicSolution& sol, const QuadratureSpec& spec,
                            std::optional<double> precomputed_cost = std::nullopt) {
    std::vector<double> cond;
    double decomp = 0.0;
    for (int i = 0; i < problem.atoms.n(); ++i) {
        decomp += detail::integrate_cell(
            problem, dual.diagram, i, sol.eta,
            [&](Vec2 x) {
                conditional_weights(problem.atoms, sol.g, sol.eta, x, cond);
                double v = 0.0;
                for (int j = 0; j < problem.atoms.n(); ++j)
                    if (j != i) v += slack(dual.diagram, i, j, x) * cond[j];
                return v * problem.density(x);
            },
            spec);
    }
    double cost = precomputed_cost ? *precomputed_cost
                                   : entropic_transport_cost(problem, dual, sol, spec);
    double direct = cost - dual.w2_squared;
    double tol = std::max(1e-8, 1e-3 * std::abs(decomp)) +
                 10.0 * (spec.abs_tol + spec.rel_tol * (std::abs(cost) + dual.w2_squared));
    if (std::abs(direct - decomp) > tol)
        throw ConsistencyError("suboptimality: decomposition disagrees with cost - W2^2");
    return decomp;
}

// Scaled dual gap d_eta = eta (g_eta - g*); both potentials satisfy
// E_nu[.] = 0 already.
inline std::pair<std::vector<double>, double> dual_gap(const DualSolution& dual,
                                                       const EntropicSolution& sol) {
    std::vector<double> d(dual.g.size());
    double inf_norm = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        d[j] = sol.eta * (sol.g[j] - dual.g[j]);
        inf_norm = std::max(inf_norm, std::abs(d[j]));
    }
    return {std::move(d), inf_norm};
}

// Auxiliary objective Phi(eta), evaluated at d = eta (g_eta - g*), and the
// identity Phi(eta) = eta (W2^2 - entropic_cost_rho).
inline double phi(const Problem& problem, const DualSolution& dual, const EntropicSolution& sol,
                  const QuadratureSpec& spec, const KlReport* precomputed = nullptr) {
    auto [d, d_inf] = dual_gap(dual, sol);
    double value = 0.0;
    for (int i = 0; i < problem.atoms.n(); ++i) {
        value += detail::integrate_cell(
            problem, dual.diagram, i, sol.eta,
            [&](Vec2 x) {
                double s = 0.0;
                for (int j = 0; j < problem.atoms.n(); ++j)
                    if (j != i)
                        s += std::exp(d[j] - d[i] - sol.eta * slack(dual.diagram, i, j, x));
                return std::log1p(s) * problem.density(x);
            },
            spec);
    }
    KlReport kl = precomputed ? *precomputed
                              : kl_and_entropic_cost(problem, dual, sol, spec);
    double rhs = sol.eta * (dual.w2_squared - kl.entropic_cost_rho);
    double tol = 1e-6 * std::max(1.0, std::abs(value)) +
                 10.0 * sol.eta *
                     (spec.abs_tol + spec.rel_tol * (dual.w2_squared + std::abs(kl.entropic_cost_rho)));
    if (std::abs(value - rhs) > tol)
        throw ConsistencyError("phi: value disagrees with eta (W2^2 - entropic cost)");
    return value;
}

}  // namespace sdot
