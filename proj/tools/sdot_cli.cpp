// SPDX-License-Identifier: MIT
//
// Command-line driver: scenario files in, diagnostics out.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sdot/asymptotics.hpp"
#include "sdot/dilog.hpp"
#include "sdot/entropic.hpp"
#include "sdot/oracle.hpp"
#include "sdot/scenario.hpp"
#include "sdot/solver.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sdot::InputError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_eta_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw sdot::InputError("--eta: not a number: '" + tok + "'");
        }
    }
    if (out.empty()) throw sdot::InputError("--eta: empty list");
    return out;
}

struct CommonOpts {
    std::string scenario_path;
    std::string out_path;
    std::string eta_csv;
    double tol = -1.0;
    double quad_rel_tol = -1.0;
    unsigned seed = 0;  // reserved; deterministic paths ignore it
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_scenario = true) {
    if (needs_scenario)
        cmd->add_option("scenario", o.scenario_path, "scenario JSON file")->required();
    cmd->add_option("--out", o.out_path, "output path (default stdout)");
    cmd->add_option("--eta", o.eta_csv, "comma-separated eta list, overrides scenario");
    cmd->add_option("--tol", o.tol, "solver tolerance override");
    cmd->add_option("--quad-rel-tol", o.quad_rel_tol, "quadrature relative tolerance override");
    cmd->add_option("--seed", o.seed, "reserved");
}

sdot::Scenario load(const CommonOpts& o) {
    sdot::Scenario sc = sdot::parse_scenario(read_file(o.scenario_path));
    if (!o.eta_csv.empty()) sc.etas = parse_eta_list(o.eta_csv);
    if (o.tol > 0.0) sc.tol = o.tol;
    if (o.quad_rel_tol > 0.0) sc.quad.rel_tol = o.quad_rel_tol;
    if (!o.out_path.empty()) sc.output = o.out_path;
    return sc;
}

std::ostream* open_out(const sdot::Scenario& sc, std::ofstream& file) {
    if (sc.output.empty()) return &std::cout;
    file.open(sc.output, std::ios::binary);
    if (!file) throw sdot::InputError("cannot open output file: " + sc.output);
    return &file;
}

void print_vector(std::ostream& os, const char* name, const std::vector<double>& v) {
    os << name << " = [";
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << sdot::format_double(v[i]);
    os << "]\n";
}

int cmd_solve(const CommonOpts& o) {
    sdot::Scenario sc = load(o);
    sdot::Problem pb = sc.problem();
    std::ofstream file;
    std::ostream& os = *open_out(sc, file);

    sdot::DualSolution dual = sdot::solve_unregularized(pb, sc.tol, sc.quad);
    os << "unregularized solve: " << dual.iterations << " iterations, residual "
       << sdot::format_double(dual.residual) << "\n";
    print_vector(os, "g_star", dual.g);
    os << "w2_squared = " << sdot::format_double(dual.w2_squared) << "\n";

    const std::vector<double>* warm = nullptr;
    sdot::EntropicSolution esol;
    for (double eta : sc.etas) {
        esol = sdot::sinkhorn_solve(pb, dual, eta, sc.tol, sc.quad, warm);
        warm = &esol.g;
        os << "eta = " << sdot::format_double(eta) << ": " << esol.iterations
           << " sinkhorn iterations, marginal residual "
           << sdot::format_double(esol.marginal_residual) << "\n";
        print_vector(os, "g_eta", esol.g);
        auto [d, d_inf] = sdot::dual_gap(dual, esol);
        os << "eta * |g_eta - g_star|_inf = " << sdot::format_double(d_inf) << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    sdot::Scenario sc = load(o);
    sdot::SweepResult sw = sdot::run_sweep(sc.problem(), sc.etas, sc.tol, sc.quad);
    std::ofstream file;
    sdot::write_csv(*open_out(sc, file), sw.rows);
    return 0;
}

int cmd_predict(const CommonOpts& o) {
    sdot::Scenario sc = load(o);
    sdot::Problem pb = sc.problem();
    std::ofstream file;
    std::ostream& os = *open_out(sc, file);

    sdot::DualSolution dual = sdot::solve_unregularized(pb, sc.tol, sc.quad);
    sdot::FacetWeights fw = sdot::all_facet_weights(dual.diagram, pb.density, sc.quad);
    sdot::Prediction pred;
    pred.subopt_constant = sdot::predict_subopt_constant(fw, pb.atoms);
    pred.entropy_nu = sdot::shannon_entropy(pb.atoms.weights);
    pred.w2_squared = dual.w2_squared;
    os << "w2_squared = " << sdot::format_double(pred.w2_squared) << "\n";
    os << "entropy_nu = " << sdot::format_double(pred.entropy_nu) << "\n";
    os << "subopt_constant = " << sdot::format_double(pred.subopt_constant) << "\n";
    for (double eta : sc.etas)
        os << "predicted entropic cost at eta = " << sdot::format_double(eta) << ": "
           << sdot::format_double(sdot::predicted_entropic_cost(pred, eta)) << "\n";
    return 0;
}

int cmd_verify_identities(const CommonOpts&) {
    using sdot::dilog;
    const double pi = std::numbers::pi;
    bool ok = true;
    auto check = [&](const char* name, double residual, double tol) {
        bool pass = std::isfinite(residual) && residual <= tol;
        std::printf("%-44s residual %.3e (tol %.1e) %s\n", name, residual, tol,
                    pass ? "ok" : "FAIL");
        ok = ok && pass;
    };

    check("dilog(-1) + pi^2/12", std::fabs(dilog(-1.0) + pi * pi / 12.0), 1e-12);
    check("dilog(1) - pi^2/6", std::fabs(dilog(1.0) - sdot::zeta2()), 1e-12);
    for (double a : {0.1, 1.0, 5.0, 10.0}) {
        double x = std::exp(a);
        double lhs = dilog(-x) + dilog(-1.0 / x);
        double rhs = -sdot::zeta2() - 0.5 * a * a;
        char name[64];
        std::snprintf(name, sizeof(name), "inversion identity, a = %g", a);
        check(name, std::fabs(lhs - rhs), 1e-10);
    }
    sdot::QuadratureSpec spec;
    for (double c : {0.5, 1.0, 2.0}) {
        double target = -dilog(-1.0 / c);
        double i1 = sdot::integrate_1d(
            [&](double t) { return std::log1p(std::exp(-t) / c); }, 0.0, 60.0, spec);
        double i2 = sdot::integrate_1d(
            [&](double t) { return t * std::exp(-t) / (c + std::exp(-t)); }, 0.0, 60.0, spec);
        char name[64];
        std::snprintf(name, sizeof(name), "log integral vs -dilog(-1/c), c = %g", c);
        check(name, std::fabs(i1 - target), 1e-8);
        std::snprintf(name, sizeof(name), "tail integral vs -dilog(-1/c), c = %g", c);
        check(name, std::fabs(i2 - target), 1e-8);
    }
    return ok ? 0 : 3;
}

int cmd_oracle_compare(const CommonOpts& o, int grid_n) {
    sdot::Scenario sc = load(o);
    sdot::Problem pb = sc.problem();
    if (pb.dim() != 1) throw sdot::InputError("oracle-compare: 1D scenarios only");
    std::ofstream file;
    std::ostream& os = *open_out(sc, file);

    sdot::DualSolution dual = sdot::solve_unregularized(pb, sc.tol, sc.quad);
    const std::vector<double>* warm = nullptr;
    sdot::EntropicSolution esol;
    for (double eta : sc.etas) {
        esol = sdot::sinkhorn_solve(pb, dual, eta, sc.tol, sc.quad, warm);
        warm = &esol.g;
        double sd_cost = sdot::entropic_transport_cost(pb, dual, esol, sc.quad);

        sdot::DiscreteProblem dp = sdot::discretize(pb.density, grid_n, pb.atoms, eta, sc.quad);
        sdot::OracleResult oracle = sdot::dense_sinkhorn(dp, sc.tol);

        double g_gap = 0.0;
        for (std::size_t j = 0; j < esol.g.size(); ++j)
            g_gap = std::max(g_gap, std::fabs(esol.g[j] - oracle.g[j]));
        os << "eta = " << sdot::format_double(eta) << ", N = " << grid_n << "\n";
        os << "  semidiscrete cost = " << sdot::format_double(sd_cost) << "\n";
        os << "  oracle cost       = " << sdot::format_double(oracle.cost) << "\n";
        os << "  relative gap      = "
           << sdot::format_double(std::fabs(sd_cost - oracle.cost) / std::max(1e-300, std::fabs(sd_cost)))
           << "\n";
        os << "  |g - g_oracle|_inf = " << sdot::format_double(g_gap) << "\n";
    }
    return 0;
}

int cmd_case_study(const CommonOpts& o) {
    sdot::Scenario sc = load(o);
    sdot::Problem pb = sc.problem();
    if (pb.dim() != 1) throw sdot::InputError("case-study: 1D scenarios only");
    std::ofstream file;
    std::ostream& os = *open_out(sc, file);
    os << "eta,case_study_suboptimality,suboptimality_scaled\n";
    for (double eta : sc.etas) {
        double s = sdot::case_study_subopt(pb.density, eta, sc.quad);
        os << sdot::format_double(eta) << ',' << sdot::format_double(s) << ','
           << sdot::format_double(eta * eta * s) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-discrete entropic optimal transport toolkit"};
    app.require_subcommand(1);

    CommonOpts solve_o, sweep_o, predict_o, oracle_o, case_o, verify_o;
    int grid_n = 2000;

    CLI::App* solve = app.add_subcommand("solve", "solve dual potentials for one scenario");
    add_common(solve, solve_o);
    CLI::App* sweep = app.add_subcommand("sweep", "eta sweep, emits diagnostics CSV");
    add_common(sweep, sweep_o);
    CLI::App* predict = app.add_subcommand("predict", "print predicted constants");
    add_common(predict, predict_o);
    CLI::App* verify = app.add_subcommand("verify-identities", "dilog/quadrature identity suite");
    add_common(verify, verify_o, /*needs_scenario=*/false);
    CLI::App* oracle = app.add_subcommand("oracle-compare", "dense grid oracle comparison");
    add_common(oracle, oracle_o);
    oracle->add_option("--grid", grid_n, "number of grid cells")->default_val(2000);
    CLI::App* case_study = app.add_subcommand("case-study", "closed-form suboptimality table");
    add_common(case_study, case_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_o);
        if (sweep->parsed()) return cmd_sweep(sweep_o);
        if (predict->parsed()) return cmd_predict(predict_o);
        if (verify->parsed()) return cmd_verify_identities(verify_o);
        if (oracle->parsed()) return cmd_oracle_compare(oracle_o, grid_n);
        if (case_study->parsed()) return cmd_case_study(case_o);
    } catch (const sdot::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const sdot::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sdot::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sdot::ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
