// SPDX-License-Identifier: MIT
//
// Source densities: 1D gaussian / laplace / uniform / power-law families and
// 2D uniform / truncated-gaussian polygon densities. Unbounded families are
// truncated where the tail mass is negligible and renormalized, so every
// density integrates to 1 over its stored support.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sdot/errors.hpp"
#include "sdot/geometry.hpp"
#include "sdot/quadrature.hpp"

namespace sdot {

enum class DensityFamily { gaussian, laplace, uniform, power_law, uniform2d, gaussian2d };

inline const char* family_name(DensityFamily f) {
    switch (f) {
        case DensityFamily::gaussian: return "gaussian";
        case DensityFamily::laplace: return "laplace";
        case DensityFamily::uniform: return "uniform";
        case DensityFamily::power_law: return "power_law";
        case DensityFamily::uniform2d: return "uniform2d";
        case DensityFamily::gaussian2d: return "gaussian2d";
    }
    return "?";
}

class Density {
public:
    static Density gaussian(double mean, double sigma) {
        if (sigma <= 0.0) throw InputError("gaussian: sigma must be > 0");
        Density d;
        d.family_ = DensityFamily::gaussian;
        d.dim_ = 1;
        d.mean_ = mean;
        d.scale_ = sigma;
        d.support_ = {mean - 8.0 * sigma, mean + 8.0 * sigma};
        d.norm_ = std::erf(8.0 / std::numbers::sqrt2);  // truncated mass
        return d;
    }

    static Density laplace(double mean, double scale) {
        if (scale <= 0.0) throw InputError("laplace: scale must be > 0");
        Density d;
        d.family_ = DensityFamily::laplace;
        d.dim_ = 1;
        d.mean_ = mean;
        d.scale_ = scale;
        d.support_ = {mean - 30.0 * scale, mean + 30.0 * scale};
        d.norm_ = 1.0 - std::exp(-30.0);
        return d;
    }

    static Density uniform(double lo, double hi) {
        if (hi <= lo) throw InputError("uniform: empty support");
        Density d;
        d.family_ = DensityFamily::uniform;
        d.dim_ = 1;
        d.support_ = {lo, hi};
        d.norm_ = 1.0;
        return d;
    }

    // mu(x) proportional to |x|^{-p}; on [-1, 1] the normalization is the
    // classical c_p = (1 - p) / 2.
    static Density power_law(double p, double lo = -1.0, double hi = 1.0) {
        if (p < 0.0 || p >= 1.0) throw InputError("power_law: exponent must be in [0, 1)");
        if (!(lo < 0.0 && hi > 0.0)) throw InputError("power_law: support must straddle 0");
        Density d;
        d.family_ = DensityFamily::power_law;
        d.dim_ = 1;
        d.p_ = p;
        d.support_ = {lo, hi};
        d.norm_ = (std::pow(-lo, 1.0 - p) + std::pow(hi, 1.0 - p)) / (1.0 - p);
        return d;
    }

    static Density uniform2d(Polygon poly) {
        require_convex_ccw(poly);
        Density d;
        d.family_ = DensityFamily::uniform2d;
        d.dim_ = 2;
        d.polygon_ = std::move(poly);
        d.norm_ = polygon_area(d.polygon_);
        return d;
    }

    static Density gaussian2d(Vec2 mean, double cxx, double cxy, double cyy, Polygon truncation,
                              const QuadratureSpec& spec = {}) {
        require_convex_ccw(truncation);
        double det = cxx * cyy - cxy * cxy;
        if (cxx <= 0.0 || det <= 0.0) throw InputError("gaussian2d: covariance not positive definite");
        Density d;
        d.family_ = DensityFamily::gaussian2d;
        d.dim_ = 2;
        d.mean2_ = mean;
        d.cxx_ = cxx;
        d.cxy_ = cxy;
        d.cyy_ = cyy;
        d.det_ = det;
        d.polygon_ = std::move(truncation);
        d.norm_ = 1.0;
        d.norm_ = integrate_polygon([&](Vec2 p) { return d.raw2d(p); }, d.polygon_, spec);
        return d;
    }

    DensityFamily family() const { return family_; }
    int dim() const { return dim_; }
    Interval support() const { return support_; }
    const Polygon& support_polygon() const { return polygon_; }

    double operator()(double x) const {
        if (dim_ != 1) throw InputError("density: scalar evaluation on a 2D density");
        if (x < support_.lo || x > support_.hi) return 0.0;
        return raw1d(x) / norm_;
    }

    double operator()(Vec2 p) const {
        if (dim_ == 1) return (*this)(p.x);
        if (!inside_polygon(p)) return 0.0;
        return raw2d(p) / norm_;
    }

    // One-sided limit from inside the support; used for facet weights whose
    // breakpoint lands exactly on a support endpoint.
    double closure_value(double x) const {
        double pad = 1e-9 * (support_.hi - support_.lo);
        if (x < support_.lo - pad || x > support_.hi + pad) return 0.0;
        return raw1d(std::clamp(x, support_.lo, support_.hi)) / norm_;
    }

    // Exact (closed-form) distribution function on the truncated support.
    double cdf(double x) const {
        if (dim_ != 1) throw InputError("density: cdf is 1D-only");
        if (x <= support_.lo) return 0.0;
        if (x >= support_.hi) return 1.0;
        switch (family_) {
            case DensityFamily::uniform:
                return (x - support_.lo) / support_.length();
            case DensityFamily::gaussian: {
                auto Phi = [](double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); };
                double z = (x - mean_) / scale_;
                return (Phi(z) - Phi(-8.0)) / norm_;
            }
            case DensityFamily::laplace: {
                double z = (x - mean_) / scale_;
                double F = z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
                return (F - 0.5 * std::exp(-30.0)) / norm_;
            }
            case DensityFamily::power_law: {
                auto G = [&](double t) {
                    return std::copysign(std::pow(std::abs(t), 1.0 - p_), t) / (1.0 - p_);
                };
                return (G(x) - G(support_.lo)) / norm_;
            }
            default:
                throw InputError("density: cdf is 1D-only");
        }
    }

    double quantile(double q) const {
        if (q < 0.0 || q > 1.0) throw InputError("quantile: q must be in [0, 1]");
        double lo = support_.lo, hi = support_.hi;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * support_.length(); ++it) {
            double mid = 0.5 * (lo + hi);
            (cdf(mid) < q ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // Intrinsic quadrature refinement points (integrable singularity, kink).
    std::vector<RefinePoint1D> refinements() const {
        switch (family_) {
            case DensityFamily::power_law: return {{0.0, 1e-6}};
            case DensityFamily::laplace: return {{mean_, 0.1 * scale_}};
            default: return {};
        }
    }

    bool inside_polygon(Vec2 p, double eps = 1e-12) const {
        for (std::size_t k = 0; k < polygon_.size(); ++k) {
            Vec2 a = polygon_[k];
            Vec2 b = polygon_[(k + 1) % polygon_.size()];
            if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < -eps) return false;
        }
        return true;
    }

private:
    Density() = default;

    double raw1d(double x) const {
        switch (family_) {
            case DensityFamily::gaussian: {
                double z = (x - mean_) / scale_;
                return std::exp(-0.5 * z * z) / (scale_ * std::sqrt(2.0 * std::numbers::pi));
            }
            case DensityFamily::laplace:
                return std::exp(-std::abs(x - mean_) / scale_) / (2.0 * scale_);
            case DensityFamily::uniform:
                return 1.0 / support_.length();
            case DensityFamily::power_law:
                return std::pow(std::abs(x), -p_);
            default:
                throw InputError("density: 1D evaluation on a 2D density");
        }
    }

    double raw2d(Vec2 p) const {
        if (family_ == DensityFamily::uniform2d) return 1.0;
        Vec2 r = p - mean2_;
        double q = (cyy_ * r.x * r.x - 2.0 * cxy_ * r.x * r.y + cxx_ * r.y * r.y) / det_;
        return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det_));
    }

    DensityFamily family_ = DensityFamily::uniform;
    int dim_ = 1;
    double mean_ = 0.0;
    double scale_ = 1.0;
    double p_ = 0.0;
    Interval support_;
    Polygon polygon_;
    Vec2 mean2_;
    double cxx_ = 1.0, cxy_ = 0.0, cyy_ = 1.0, det_ = 1.0;
    double norm_ = 1.0;
};

}  // namespace sdot
