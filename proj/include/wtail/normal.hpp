#pragma once

#include <cmath>

#include "wtail/error.hpp"

namespace wtail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

inline double norm_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }
inline double norm_pdf(double x) { return std::exp(norm_log_pdf(x)); }
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
inline double norm_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

namespace detail {

// Mills-ratio denominator via the Laplace continued fraction,
// S(x) = pdf(x) / (x + 1/(x + 2/(x + 3/(...)))); rapid for large x.
inline double mills_denom(double x) {
    double t = 0.0;
    for (int k = 64; k >= 1; --k) t = k / (x + t);
    return x + t;
}

// Inverse normal CDF, algorithm AS241 (Wichura 1988, PPND16 variant).
inline double as241(double u) {
    static constexpr double a[8] = {
        3.3871328727963666080e+00, 1.3314166789178437745e+02, 1.9715909503065514427e+03,
        1.3731693765509461125e+04, 4.5921953931549871457e+04, 6.7265770927008700853e+04,
        3.3430575583588128105e+04, 2.5090809287301226727e+03};
    static constexpr double b[8] = {
        1.0, 4.2313330701600911252e+01, 6.8718700749205790830e+02,
        5.3941960214247511077e+03, 2.1213794301586595867e+04, 3.9307895800092710610e+04,
        2.8729085735721942674e+04, 5.2264952788528545610e+03};
    static constexpr double c[8] = {
        1.42343711074968357734e+00, 4.63033784615654529590e+00, 5.76949722146069140550e+00,
        3.64784832476320460504e+00, 1.27045825245236838258e+00, 2.41780725177450611770e-01,
        2.27238449892691845833e-02, 7.74545014278341407640e-04};
    static constexpr double d[8] = {
        1.0, 2.05319162663775882187e+00, 1.67638483018380384940e+00,
        6.89767334985100004550e-01, 1.48103976427480074590e-01, 1.51986665636164571966e-02,
        5.47593808499534494600e-04, 1.05075007164441684324e-09};
    static constexpr double e[8] = {
        6.65790464350110377720e+00, 5.46378491116411436990e+00, 1.78482653991729133580e+00,
        2.96560571828504891230e-01, 2.65321895265761230930e-02, 1.24266094738807843860e-03,
        2.71155556874348757815e-05, 2.01033439929228813265e-07};
    static constexpr double f[8] = {
        1.0, 5.99832206555887937690e-01, 1.36929880922735805310e-01,
        1.48753612908506148525e-02, 7.86869131145613259100e-04, 1.84631831751005468180e-05,
        1.42151175831644588870e-07, 2.04426310338993978564e-15};

    auto horner = [](const double (&p)[8], double r) {
        double s = p[7];
        for (int i = 6; i >= 0; --i) s = s * r + p[i];
        return s;
    };

    const double q = u - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * horner(a, r) / horner(b, r);
    }
    double r = (q < 0.0) ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = horner(c, r) / horner(d, r);
    } else {
        r -= 5.0;
        z = horner(e, r) / horner(f, r);
    }
    return (q < 0.0) ? -z : z;
}

}  // namespace detail

// log of the standard normal survival function, accurate over the whole line.
inline double norm_log_sf(double x) {
    if (x <= 0.0) return std::log1p(-0.5 * std::erfc(-x * kInvSqrt2));
    if (x <= 25.0) return std::log(0.5 * std::erfc(x * kInvSqrt2));
    return norm_log_pdf(x) - std::log(detail::mills_denom(x));
}

inline double norm_hazard(double x) { return std::exp(norm_log_pdf(x) - norm_log_sf(x)); }

// Inverse normal CDF: AS241 start plus one Newton correction against the
// erfc-based CDF (skipped where the density underflows).
inline double norm_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) fail(errc::domain_error, "norm_quantile: u must lie in (0,1)");
    double z = detail::as241(u);
    const double pdf = norm_pdf(z);
    if (pdf > 1e-300) {
        const double resid = (u < 0.5) ? (norm_cdf(z) - u) : ((1.0 - u) - norm_sf(z));
        z -= resid / pdf;
    }
    return z;
}

// Solve -log S(z) = t for t > 0.  Works directly on the log-survival scale so
// deep-tail targets (t far beyond -log DBL_MIN in u-space) stay well-posed.
inline double norm_h_inverse(double t) {
    if (!(t > 0.0)) fail(errc::domain_error, "norm_h_inverse: t must be positive");
    double z = (t <= 36.0) ? detail::as241(-std::expm1(-t)) : std::sqrt(2.0 * t);
    for (int iter = 0; iter < 50; ++iter) {
        const double g = norm_log_sf(z) + t;
        if (std::abs(g) <= 1e-13 * std::max(1.0, t)) return z;
        const double h = norm_hazard(z);
        if (!(h > 0.0) || !std::isfinite(h)) break;
        z += g / h;
    }
    if (std::abs(norm_log_sf(z) + t) <= 1e-9 * std::max(1.0, t)) return z;
    fail(errc::inversion_failed, "norm_h_inverse: Newton iteration did not converge");
}

}  // namespace wtail
