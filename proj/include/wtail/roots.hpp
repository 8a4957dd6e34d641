#pragma once

#include <cmath>
#include <functional>

#include "wtail/error.hpp"

namespace wtail {
namespace detail {

// Safeguarded Newton for a strictly increasing f on [lo, hi]: every Newton
// step is clamped to the current bracket and falls back to bisection when it
// leaves it or the derivative degenerates.  Requires f(lo) <= target <= f(hi).
inline double solve_increasing(const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               double target, double lo, double hi, double x0,
                               double ftol) {
    double x = std::min(std::max(x0, lo), hi);
    bool exhausted = false;
    for (int iter = 0; iter < 200 && !exhausted; ++iter) {
        const double g = f(x) - target;
        if (std::abs(g) <= ftol) return x;
        if (g > 0.0) hi = x; else lo = x;
        const double d = df(x);
        double next = (d > 0.0 && std::isfinite(d)) ? x - g / d : x;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) {
            // Bracket collapsed in double precision; the residual check below
            // decides whether the collapse point counts as converged.
            exhausted = hi - lo <= 1e-15 * std::max(1.0, std::abs(x));
            if (!exhausted) {
                next = 0.5 * (lo + hi);
                exhausted = (next == x);
            }
            if (exhausted) break;
        }
        x = next;
    }
    if (std::abs(f(x) - target) <= 1e4 * ftol) return x;
    fail(errc::inversion_failed, "solve_increasing: no convergence within iteration budget");
}

}  // namespace detail
}  // namespace wtail
