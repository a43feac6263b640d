// SPDX-License-Identifier: MIT
//
// Predicted asymptotic constants, the symmetric-1D closed-form oracle, eta
// sweeps and log-log rate fitting.
#pragma once

#include <cmath>
#include <vector>

#include "sdot/dilog.hpp"
#include "sdot/entropic.hpp"
#include "sdot/errors.hpp"
#include "sdot/power_diagram.hpp"
#include "sdot/problem.hpp"
#include "sdot/solver.hpp"

namespace sdot {

struct Prediction {
    double subopt_constant = 0.0;  // C = (zeta(2)/2) sum_{i<j} w_ij / |y_i - y_j|
    double entropy_nu = 0.0;       // H(nu)
    double w2_squared = 0.0;
};

inline double predict_subopt_constant(const FacetWeights& fw, const Atoms& atoms) {
    double sum = 0.0;
    for (const auto& [key, wij] : fw.w)
        sum += wij / norm(atoms.positions[key.first] - atoms.positions[key.second]);
    return 0.5 * zeta2() * sum;
}

// Second-order expansion of the entropic cost: W2^2 + H(nu)/eta - C/eta^2.
inline double predicted_entropic_cost(const Prediction& p, double eta) {
    return p.w2_squared + p.entropy_nu / eta - p.subopt_constant / (eta * eta);
}

// Closed-form suboptimality for a symmetric 1D density with atoms {-1, +1}
// and weights (1/2, 1/2): 8 int_0^inf x / (1 + e^{4 eta x}) mu(x) dx. This is
// the independent oracle for the general pipeline on symmetric problems.
inline double case_study_subopt(const Density& density, double eta, const QuadratureSpec& spec) {
    if (density.dim() != 1) throw InputError("case_study_subopt: 1D densities only");
    if (eta <= 0.0) throw InputError("case_study_subopt: eta must be > 0");
    std::vector<RefinePoint1D> refine = density.refinements();
    refine.push_back({0.0, 1.0 / (4.0 * eta)});
    return integrate_1d(
        [&](double x) { return 8.0 * x / (1.0 + std::exp(4.0 * eta * x)) * density(x); }, 0.0,
        density.support().hi, spec, refine);
}

// One eta sample of every scalar diagnostic; column order matches the CSV.
struct DiagnosticsRow {
    double eta = 0.0;
    double cost = 0.0;
    double w2_squared = 0.0;
    double suboptimality = 0.0;
    double suboptimality_scaled = 0.0;  // eta^2 * suboptimality
    double kl_mu_rho = 0.0;
    double kl_mu_nu = 0.0;
    double entropic_cost = 0.0;         // cost + KL(pi | mu x nu) / eta
    double d_eta_inf_norm = 0.0;        // eta * |g_eta - g*|_inf
    double phi = 0.0;
    double phi_scaled = 0.0;            // eta * Phi(eta)
    double predicted_constant = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least-squares slope of log(suboptimality) against log(eta), discarding the
// pre-asymptotic rows below eta_min.
inline RateFit fit_rate(const std::vector<DiagnosticsRow>& rows, double eta_min = 32.0) {
    std::vector<double> xs, ys;
    for (const DiagnosticsRow& r : rows)
        if (r.eta >= eta_min && r.suboptimality > 0.0) {
            xs.push_back(std::log(r.eta));
            ys.push_back(std::log(r.suboptimality));
        }
    if (xs.size() < 3) throw InputError("fit_rate: need at least 3 usable rows");
    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
        syy += ys[k] * ys[k];
    }
    RateFit fit;
    double vxx = sxx - sx * sx / n;
    double vxy = sxy - sx * sy / n;
    double vyy = syy - sy * sy / n;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r2 = vyy > 0.0 ? vxy * vxy / (vxx * vyy) : 1.0;
    return fit;
}

struct SweepResult {
    DualSolution dual;
    Prediction prediction;
    std::vector<DiagnosticsRow> rows;
};

// Fig.-1 style sweep: one unregularized solve, then warm-started entropic
// solves in ascending eta with a full diagnostics row per eta.
inline SweepResult run_sweep(const Problem& problem, const std::vector<double>& etas, double tol,
                             const QuadratureSpec& spec) {
    if (etas.empty()) throw InputError("run_sweep: empty eta list");
    for (std::size_t k = 0; k + 1 < etas.size(); ++k)
        if (etas[k + 1] <= etas[k]) throw InputError("run_sweep: eta list must be ascending");

    SweepResult out;
    out.dual = solve_unregularized(problem, tol, spec);
    FacetWeights fw = all_facet_weights(out.dual.diagram, problem.density, spec);
    out.prediction.subopt_constant = predict_subopt_constant(fw, problem.atoms);
    out.prediction.entropy_nu = shannon_entropy(problem.atoms.weights);
    out.prediction.w2_squared = out.dual.w2_squared;

    const std::vector<double>* warm = nullptr;
    std::vector<double> prev_g;
    for (double eta : etas) {
        // Tighten the marginal tolerance as eta grows: the fixed point pins g
        // only to ~residual/sensitivity, and a fixed tolerance would leave
        // eta*|g_eta - g*| growing linearly in eta once the true gap is below
        // measurement resolution.
        double eta_tol = tol * std::pow(etas.front() / eta, 1.25);
        EntropicSolution esol = sinkhorn_solve(problem, out.dual, eta, eta_tol, spec, warm);
        DiagnosticsRow row;
        row.eta = eta;
        row.w2_squared = out.dual.w2_squared;
        row.cost = entropic_transport_cost(problem, out.dual, esol, spec);
        KlReport kl = kl_and_entropic_cost(problem, out.dual, esol, spec, row.cost);
        row.kl_mu_rho = kl.kl_mu_rho;
        row.kl_mu_nu = kl.kl_mu_nu;
        row.entropic_cost = kl.entropic_cost_nu;
        row.suboptimality = suboptimality(problem, out.dual, esol, spec, row.cost);
        row.suboptimality_scaled = eta * eta * row.suboptimality;
        row.d_eta_inf_norm = dual_gap(out.dual, esol).second;
        row.phi = phi(problem, out.dual, esol, spec, &kl);
        row.phi_scaled = eta * row.phi;
        row.predicted_constant = out.prediction.subopt_constant;
        out.rows.push_back(row);
        prev_g = esol.g;
        warm = &prev_g;
    }
    return out;
}

}  // namespace sdot
