#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "wtail/error.hpp"

namespace wtail {
namespace detail {

struct gk_result {
    double value;
    double error;
};

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK dqk15
// nodes).  The error estimate follows the usual (200*|K15-G7|)^{3/2} scaling,
// capped so it never undercuts the raw rule difference.
template <class F>
gk_result gk15(const F& f, double a, double b) {
    static constexpr double xgk[8] = {
        0.991455371120813, 0.949107912342759, 0.864864423359769,
        0.741531185599394, 0.586087235467691, 0.405845151377397,
        0.207784955007898, 0.0};
    static constexpr double wgk[8] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250,
        0.140653259715525, 0.169004726639267, 0.190350578064785,
        0.204432940075298, 0.209482141084728};
    static constexpr double wg[4] = {
        0.129484966168870, 0.279705391489277, 0.381830050505119,
        0.417959183673469};

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kronrod += wgk[j] * fsum;
        if (j % 2 == 1) gauss += wg[j / 2] * fsum;  // odd Kronrod indices carry Gauss nodes
    }
    kronrod *= h;
    gauss *= h;
    const double diff = std::abs(kronrod - gauss);
    double err = 200.0 * diff;
    if (err < 1.0) err *= std::sqrt(err);
    return {kronrod, std::max(err, diff)};
}

}  // namespace detail

// Adaptive bisection on [a,b]: repeatedly split the segment with the largest
// error estimate until the summed estimate meets the tolerance.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol, double rel_tol,
                          int max_segments = 2000) {
    struct seg {
        double a, b, value, error;
    };
    if (!(b > a)) return 0.0;
    std::vector<seg> segs;
    auto first = detail::gk15(f, a, b);
    segs.push_back({a, b, first.value, first.error});
    double total = first.value;
    double total_err = first.error;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(segs.size()) >= max_segments)
            fail(errc::integral_diverged, "adaptive quadrature exceeded its segment budget");
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        const seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (mid <= s.a || mid >= s.b) break;  // interval exhausted in double precision
        auto left = detail::gk15(f, s.a, mid);
        auto right = detail::gk15(f, mid, s.b);
        segs[worst] = {s.a, mid, left.value, left.error};
        segs.push_back({mid, s.b, right.value, right.error});
        total = 0.0;
        total_err = 0.0;
        for (const seg& t : segs) {
            total += t.value;
            total_err += t.error;
        }
    }
    return total;
}

// Integrate f over (0, b] in geometric panels [b*2^-(j+1), b*2^-j] toward the
// singular endpoint at zero, stopping once panel contributions fall below
// stop_tol.  Panels that keep growing signal a non-integrable singularity.
template <class F>
double integrate_lower_singular(const F& f, double b, double stop_tol = 1e-12,
                                double panel_abs = 1e-14, double panel_rel = 1e-10,
                                int max_panels = 600) {
    if (!(b > 0.0)) return 0.0;
    double total = 0.0;
    double hi = b;
    double last = std::numeric_limits<double>::infinity();
    int growing = 0;
    for (int j = 0; j < max_panels; ++j) {
        const double lo = 0.5 * hi;
        const double p = integrate_adaptive(f, lo, hi, panel_abs, panel_rel);
        total += p;
        if (j >= 4 && std::abs(p) < stop_tol) return total;
        if (j >= 8 && std::abs(p) > std::abs(last)) {
            if (++growing >= 10)
                fail(errc::integral_diverged, "panel contributions grow toward the endpoint");
        } else {
            growing = 0;
        }
        last = p;
        hi = lo;
        if (hi == 0.0) return total;
    }
    fail(errc::integral_diverged, "panel contributions did not decay below the stopping tolerance");
}

}  // namespace wtail
