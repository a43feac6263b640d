// SPDX-License-Identifier: MIT
//
// Real dilogarithm Li2 on (-inf, 1] and the constant zeta(2).
#pragma once

#include <cmath>
#include <numbers>

#include "sdot/errors.hpp"

namespace sdot {

inline double zeta2() { return std::numbers::pi * std::numbers::pi / 6.0; }

namespace detail {

// Power series sum_{s>=1} z^s / s^2. Converges geometrically for |z| < 1;
// callers keep |z| <= 2/3 so the 200-term cap is never binding.
inline double dilog_series(double z) {
    double sum = 0.0;
    double zpow = 1.0;
    for (int s = 1; s <= 200; ++s) {
        zpow *= z;
        double term = zpow / (static_cast<double>(s) * s);
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum)) break;
    }
    return sum;
}

double dilog_impl(double z);

// Landen transform Li2(z) = -log^2(1-z)/2 - Li2(z/(z-1)), valid for z < 1.
inline double dilog_landen(double z) {
    double l = std::log1p(-z);
    return -0.5 * l * l - dilog_impl(z / (z - 1.0));
}

inline double dilog_impl(double z) {
    if (z == 1.0) return zeta2();
    if (z < -2.0) {
        // Inversion: Li2(-x) + Li2(-1/x) = -zeta(2) - log^2(x)/2 for x > 0.
        double l = std::log(-z);
        return -zeta2() - 0.5 * l * l - dilog_series(1.0 / z);
    }
    if (std::abs(z) <= 0.5) return dilog_series(z);
    if (z < 0.0) return dilog_landen(z);  // maps [-2,-1/2] into [1/3,2/3]
    // (1/2, 1): reflection Li2(z) + Li2(1-z) = zeta(2) - log(z)log(1-z).
    return zeta2() - std::log(z) * std::log1p(-z) - dilog_series(1.0 - z);
}

}  // namespace detail

inline double dilog(double z) {
    if (z > 1.0) throw InputError("dilog: argument must be <= 1");
    return detail::dilog_impl(z);
}

}  // namespace sdot
