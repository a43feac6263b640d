// SPDX-License-Identifier: MIT
//
// Scenario configuration (JSON), strict-schema parsing and CSV emission for
// sweep diagnostics.
#pragma once

#include <cstdio>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "sdot/asymptotics.hpp"
#include "sdot/density.hpp"
#include "sdot/errors.hpp"
#include "sdot/problem.hpp"
#include "sdot/quadrature.hpp"

namespace sdot {

struct Scenario {
    Density density = Density::uniform(-1.0, 1.0);
    Atoms atoms;
    std::vector<double> etas;
    double tol = 1e-10;
    QuadratureSpec quad;
    std::string output;

    Problem problem() const { return Problem{density, atoms}; }
};

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& obj, const std::string& path,
                       const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key))
            throw InputError("scenario: unknown key '" + path + key + "'");
}

inline double get_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw InputError("scenario: '" + path + key + "' must be a number");
    return obj[key].get<double>();
}

inline Polygon parse_polygon(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.size() < 3)
        throw InputError("scenario: '" + path + "' must be an array of >= 3 [x, y] pairs");
    Polygon poly;
    for (const auto& v : arr) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw InputError("scenario: '" + path + "' entries must be [x, y] pairs");
        poly.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return poly;
}

inline Density parse_density(const json& d) {
    if (!d.is_object()) throw InputError("scenario: 'density' must be an object");
    if (!d.contains("family") || !d["family"].is_string())
        throw InputError("scenario: 'density.family' must be a string");
    std::string family = d["family"].get<std::string>();
    const std::string path = "density.";
    if (family == "gaussian") {
        check_keys(d, path, {"family", "mean", "sigma"});
        return Density::gaussian(get_number(d, path, "mean"), get_number(d, path, "sigma"));
    }
    if (family == "laplace") {
        check_keys(d, path, {"family", "mean", "scale"});
        return Density::laplace(get_number(d, path, "mean"), get_number(d, path, "scale"));
    }
    if (family == "uniform") {
        check_keys(d, path, {"family", "support"});
        if (!d.contains("support") || !d["support"].is_array() || d["support"].size() != 2)
            throw InputError("scenario: 'density.support' must be [lo, hi]");
        return Density::uniform(d["support"][0].get<double>(), d["support"][1].get<double>());
    }
    if (family == "power_law") {
        check_keys(d, path, {"family", "p", "support"});
        double lo = -1.0, hi = 1.0;
        if (d.contains("support")) {
            if (!d["support"].is_array() || d["support"].size() != 2)
                throw InputError("scenario: 'density.support' must be [lo, hi]");
            lo = d["support"][0].get<double>();
            hi = d["support"][1].get<double>();
        }
        return Density::power_law(get_number(d, path, "p"), lo, hi);
    }
    if (family == "uniform2d") {
        check_keys(d, path, {"family", "polygon"});
        if (!d.contains("polygon")) throw InputError("scenario: 'density.polygon' is required");
        return Density::uniform2d(parse_polygon(d["polygon"], "density.polygon"));
    }
    if (family == "gaussian2d") {
        check_keys(d, path, {"family", "mean", "covariance", "polygon"});
        if (!d.contains("mean") || !d["mean"].is_array() || d["mean"].size() != 2)
            throw InputError("scenario: 'density.mean' must be [x, y]");
        if (!d.contains("covariance") || !d["covariance"].is_array() || d["covariance"].size() != 2)
            throw InputError("scenario: 'density.covariance' must be a 2x2 matrix");
        if (!d.contains("polygon")) throw InputError("scenario: 'density.polygon' is required");
        Vec2 mean{d["mean"][0].get<double>(), d["mean"][1].get<double>()};
        const auto& cov = d["covariance"];
        if (!cov[0].is_array() || cov[0].size() != 2 || !cov[1].is_array() || cov[1].size() != 2)
            throw InputError("scenario: 'density.covariance' must be a 2x2 matrix");
        double cxx = cov[0][0].get<double>(), cxy = cov[0][1].get<double>();
        double cyx = cov[1][0].get<double>(), cyy = cov[1][1].get<double>();
        if (cxy != cyx) throw InputError("scenario: 'density.covariance' must be symmetric");
        return Density::gaussian2d(mean, cxx, cxy, cyy,
                                   parse_polygon(d["polygon"], "density.polygon"));
    }
    throw InputError("scenario: unknown density family '" + family + "'");
}

inline Atoms parse_atoms(const json& a, int dim) {
    if (!a.is_object()) throw InputError("scenario: 'atoms' must be an object");
    check_keys(a, "atoms.", {"positions", "weights"});
    if (!a.contains("positions") || !a["positions"].is_array())
        throw InputError("scenario: 'atoms.positions' must be an array");
    if (!a.contains("weights") || !a["weights"].is_array())
        throw InputError("scenario: 'atoms.weights' must be an array");
    Atoms atoms;
    for (const auto& p : a["positions"]) {
        if (dim == 1) {
            if (!p.is_number())
                throw InputError("scenario: 1D 'atoms.positions' entries must be numbers");
            atoms.positions.push_back({p.get<double>(), 0.0});
        } else {
            if (!p.is_array() || p.size() != 2)
                throw InputError("scenario: 2D 'atoms.positions' entries must be [x, y]");
            atoms.positions.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    }
    for (const auto& w : a["weights"]) {
        if (!w.is_number()) throw InputError("scenario: 'atoms.weights' entries must be numbers");
        atoms.weights.push_back(w.get<double>());
    }
    atoms.validate();
    return atoms;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
    detail::json doc;
    try {
        doc = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw InputError(std::string("scenario: JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("scenario: document must be a JSON object");
    detail::check_keys(doc, "", {"density", "atoms", "eta", "tol", "quadrature", "output"});
    if (!doc.contains("density")) throw InputError("scenario: 'density' is required");
    if (!doc.contains("atoms")) throw InputError("scenario: 'atoms' is required");
    if (!doc.contains("eta")) throw InputError("scenario: 'eta' is required");

    Scenario sc;
    sc.density = detail::parse_density(doc["density"]);
    sc.atoms = detail::parse_atoms(doc["atoms"], sc.density.dim());
    if (!doc["eta"].is_array() || doc["eta"].empty())
        throw InputError("scenario: 'eta' must be a non-empty array");
    for (const auto& e : doc["eta"]) {
        if (!e.is_number() || e.get<double>() <= 0.0)
            throw InputError("scenario: 'eta' entries must be positive numbers");
        sc.etas.push_back(e.get<double>());
    }
    sc.tol = sc.density.dim() == 1 ? 1e-10 : 1e-8;
    if (doc.contains("tol")) sc.tol = detail::get_number(doc, "", "tol");
    if (sc.tol <= 0.0) throw InputError("scenario: 'tol' must be > 0");
    if (sc.density.dim() == 2) {
        sc.quad.rel_tol = 1e-7;
        sc.quad.abs_tol = 1e-9;
    }
    if (doc.contains("quadrature")) {
        const auto& q = doc["quadrature"];
        if (!q.is_object()) throw InputError("scenario: 'quadrature' must be an object");
        detail::check_keys(q, "quadrature.", {"rel_tol", "abs_tol", "max_depth", "base_order"});
        if (q.contains("rel_tol")) sc.quad.rel_tol = detail::get_number(q, "quadrature.", "rel_tol");
        if (q.contains("abs_tol")) sc.quad.abs_tol = detail::get_number(q, "quadrature.", "abs_tol");
        if (q.contains("max_depth")) sc.quad.max_depth = static_cast<int>(detail::get_number(q, "quadrature.", "max_depth"));
        if (q.contains("base_order")) sc.quad.base_order = static_cast<int>(detail::get_number(q, "quadrature.", "base_order"));
        sc.quad.validate();
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw InputError("scenario: 'output' must be a string");
        sc.output = doc["output"].get<std::string>();
    }

    Problem pb = sc.problem();
    pb.validate();
    // Atoms must have the density's dimension; 2D supports must contain all
    // structure we rely on, but atoms may sit anywhere (even outside cells).
    return sc;
}

inline constexpr const char* kCsvHeader =
    "eta,cost,w2_squared,suboptimality,suboptimality_scaled,kl_mu_rho,kl_mu_nu,entropic_cost,"
    "d_eta_inf_norm,phi,phi_scaled,predicted_constant";

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
    os << kCsvHeader << "\n";
    for (const DiagnosticsRow& r : rows) {
        os << format_double(r.eta) << ',' << format_double(r.cost) << ','
           << format_double(r.w2_squared) << ',' << format_double(r.suboptimality) << ','
           << format_double(r.suboptimality_scaled) << ',' << format_double(r.kl_mu_rho) << ','
           << format_double(r.kl_mu_nu) << ',' << format_double(r.entropic_cost) << ','
           << format_double(r.d_eta_inf_norm) << ',' << format_double(r.phi) << ','
           << format_double(r.phi_scaled) << ',' << format_double(r.predicted_constant) << "\n";
    }
}

}  // namespace sdot
