#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wtail/error.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"

namespace wtail {

// log(n/i) evaluated as log1p((n-i)/i): keeps full relative precision when i
// is close to n, where the plain quotient rounds before the log.
inline double log_ratio(std::size_t n, std::size_t i) {
    if (i == 0 || i > n) fail(errc::bad_k, "log_ratio: need 1 <= i <= n");
    return std::log1p(static_cast<double>(n - i) / static_cast<double>(i));
}

// log log(n/i); requires n/i > 1 strictly.
inline double loglog_ratio(std::size_t n, std::size_t i) {
    if (i >= n) fail(errc::bad_k, "loglog_ratio: need i < n");
    return std::log(log_ratio(n, i));
}

// Weighted log-spacings estimator:
//   theta_hat = sum_i alpha_i (log X_{n-i+1,n} - log X_{n-k+1,n})
//             / sum_i alpha_i (log log(n/i) - log log(n/k)),  i = 1..k-1.
inline double theta_general(const SortedSample& s, std::size_t k, const WeightSequence& weights) {
    const std::size_t n = s.size();
    if (k < 2 || k > n - 1 || n < 3) fail(errc::bad_k, "theta_general: need 2 <= k <= n-1");
    if (weights.alphas.size() != k - 1)
        fail(errc::bad_epsilon, "theta_general: weight sequence length must equal k-1");
    const std::vector<double> spacings = top_log_spacings(s, k);
    const double llk = loglog_ratio(n, k);
    double num = 0.0, den = 0.0, norm1 = 0.0;
    for (std::size_t i = 1; i <= k - 1; ++i) {
        const double a = weights.alphas[i - 1];
        num += a * spacings[i - 1];
        den += a * (loglog_ratio(n, i) - llk);
        norm1 += std::abs(a);
    }
    if (std::abs(den) <= 1e-14 * norm1)
        fail(errc::degenerate_denominator,
             "theta_general: weighted abscissa spread is numerically zero");
    return num / den;
}

// Unit-weight special case.  Implemented as theta_general with ones so the
// two routes agree bit for bit.
inline double theta_hill(const SortedSample& s, std::size_t k) {
    WeightSequence ones;
    ones.alphas.assign(k >= 1 ? k - 1 : 0, 1.0);
    return theta_general(s, k, ones);
}

// Mean of log log(n/i) over i = 1..k-1 (the least-squares abscissa centroid).
inline double zeta_n(std::size_t n, std::size_t k) {
    if (k < 2 || k >= n) fail(errc::bad_k, "zeta_n: need 2 <= k < n");
    double s = 0.0;
    for (std::size_t i = 1; i <= k - 1; ++i) s += loglog_ratio(n, i);
    return s / static_cast<double>(k - 1);
}

// Mean upper-tail abscissa gap: (1/(k-1)) sum_i (log log(n/i) - log log(n/k)).
inline double tau_n(std::size_t n, std::size_t k) {
    if (k < 2 || k >= n) fail(errc::bad_k, "tau_n: need 2 <= k < n");
    const double llk = loglog_ratio(n, k);
    double s = 0.0;
    for (std::size_t i = 1; i <= k - 1; ++i) s += loglog_ratio(n, i) - llk;
    return s / static_cast<double>(k - 1);
}

// Centered regression weights alpha_i = log(n/k) * (log log(n/i) - zeta_n).
// eps_sup is measured against the score W(x) = -(log x + 1) they approximate.
inline WeightSequence zipf_weights(std::size_t n, std::size_t k) {
    if (k < 2 || k >= n) fail(errc::bad_k, "zipf_weights: need 2 <= k < n");
    const double scale = log_ratio(n, k);
    const double zeta = zeta_n(n, k);
    WeightSequence ws;
    ws.alphas.resize(k - 1);
    for (std::size_t i = 1; i <= k - 1; ++i) {
        ws.alphas[i - 1] = scale * (loglog_ratio(n, i) - zeta);
        const double x = static_cast<double>(i) / static_cast<double>(k);
        const double w = -(std::log(x) + 1.0);
        ws.eps_sup = std::max(ws.eps_sup, std::abs(ws.alphas[i - 1] - w));
    }
    return ws;
}

// Least-squares slope of (log log(n/i), log X_{n-i+1,n}), i = 1..k-1, through
// the centered abscissas.  Needs k >= 3 for two distinct abscissas.
inline double theta_zipf(const SortedSample& s, std::size_t k) {
    const std::size_t n = s.size();
    if (k < 3 || k > n - 1 || n < 4) fail(errc::bad_k, "theta_zipf: need 3 <= k <= n-1");
    if (!(s.order_statistic(n - k + 1) > 0.0))
        fail(errc::non_positive_tail, "theta_zipf: top-k order statistics must be positive");
    const double zeta = zeta_n(n, k);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i <= k - 1; ++i) {
        const double c = loglog_ratio(n, i) - zeta;
        num += c * std::log(s.order_statistic(n - i + 1));
        den += c * (loglog_ratio(n, i) - zeta);
    }
    if (!(den > 0.0))
        fail(errc::degenerate_denominator, "theta_zipf: abscissas carry no spread");
    return num / den;
}

// K_rho(lambda) = integral_1^lambda u^{rho-1} du for rho <= 0.
inline double k_rho(double lambda, double rho) {
    if (!(lambda >= 1.0)) fail(errc::domain_error, "k_rho: lambda must be >= 1");
    if (!(rho <= 0.0)) fail(errc::domain_error, "k_rho: rho must be <= 0");
    const double loglam = std::log(lambda);
    if (rho == 0.0) return loglam;
    return std::expm1(rho * loglam) / rho;
}

struct QqPoint {
    double abscissa;  // log log(n/i)
    double ordinate;  // log X_{n-i+1,n}
};

// Quantile-plot pairs for the top k-1 order statistics; a straight line of
// slope theta indicates Weibull-type tail behaviour.
inline std::vector<QqPoint> qq_pairs(const SortedSample& s, std::size_t k) {
    const std::size_t n = s.size();
    if (k < 2 || k > n - 1 || n < 3) fail(errc::bad_k, "qq_pairs: need 2 <= k <= n-1");
    if (!(s.order_statistic(n - k + 1) > 0.0))
        fail(errc::non_positive_tail, "qq_pairs: top-k order statistics must be positive");
    std::vector<QqPoint> pts(k - 1);
    for (std::size_t i = 1; i <= k - 1; ++i)
        pts[i - 1] = QqPoint{loglog_ratio(n, i), std::log(s.order_statistic(n - i + 1))};
    return pts;
}

// Deterministic plug-in sample with X_{n-i+1,n} = (log(n/i))^theta, i = 1..n.
// Both estimators recover theta exactly on it; used as a numerical oracle.
inline SortedSample ideal_order_statistics(std::size_t n, double theta) {
    if (n < 1) fail(errc::empty_sample, "ideal_order_statistics: need n >= 1");
    std::vector<double> v(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double u = (i == n) ? 0.0 : log_ratio(n, i);
        v[n - i] = (u == 0.0) ? 0.0 : std::pow(u, theta);
    }
    return SortedSample::ingest(std::move(v));
}

// One-pass sweeps over every admissible k, O(n) total via running sums in
// extended precision.  Entry [k-2] holds the estimate at k (k = 2..n-1);
// inadmissible k (non-positive tail, k below the least-squares minimum) are
// marked NaN.
inline std::vector<double> theta_hill_all_k(const SortedSample& s) {
    const std::size_t n = s.size();
    if (n < 3) fail(errc::bad_k, "theta_hill_all_k: need n >= 3");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> out(n - 2, nan);
    long double sum_logx = 0.0L, sum_llr = 0.0L;
    for (std::size_t k = 2; k <= n - 1; ++k) {
        // extend running sums with the i = k-1 term
        const double xk1 = s.order_statistic(n - (k - 1) + 1);
        if (!(xk1 > 0.0)) break;  // all larger k include this order statistic
        sum_logx += std::log(xk1);
        sum_llr += loglog_ratio(n, k - 1);
        const double base = s.order_statistic(n - k + 1);
        if (!(base > 0.0)) break;
        const long double m = static_cast<long double>(k - 1);
        const long double num = sum_logx - m * static_cast<long double>(std::log(base));
        const long double den = sum_llr - m * static_cast<long double>(loglog_ratio(n, k));
        if (std::abs(static_cast<double>(den)) <= 1e-14 * static_cast<double>(m)) continue;
        out[k - 2] = static_cast<double>(num / den);
    }
    return out;
}

inline std::vector<double> theta_zipf_all_k(const SortedSample& s) {
    const std::size_t n = s.size();
    if (n < 4) fail(errc::bad_k, "theta_zipf_all_k: need n >= 4");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> out(n - 2, nan);
    long double sx = 0.0L, sxx = 0.0L, sy = 0.0L, sxy = 0.0L;
    for (std::size_t k = 2; k <= n - 1; ++k) {
        const double xk1 = s.order_statistic(n - (k - 1) + 1);
        if (!(xk1 > 0.0)) break;
        const long double x = loglog_ratio(n, k - 1);
        const long double y = std::log(xk1);
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
        if (k < 3) continue;
        const long double m = static_cast<long double>(k - 1);
        const long double zeta = sx / m;
        const long double den = sxx - zeta * sx;
        if (!(den > 0.0L)) continue;
        out[k - 2] = static_cast<double>((sxy - zeta * sy) / den);
    }
    return out;
}

}  // namespace wtail
