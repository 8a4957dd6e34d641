#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wtail/error.hpp"
#include "wtail/gammainc.hpp"
#include "wtail/normal.hpp"
#include "wtail/rng.hpp"
#include "wtail/roots.hpp"
#include "wtail/sample.hpp"

namespace wtail {

// One catalog family: true tail coefficient, second-order bias data, and the
// tail functions needed for exact inverse-transform sampling.
// rho is empty when the second-order rate is "-infinity" (no bias term at
// any order; the Weibull family), never a floating-point infinity.
struct TailModel {
    std::string name;
    std::map<std::string, double> params;
    double theta = 1.0;
    std::optional<double> rho;
    double support_lo = 0.0;
    std::function<double(double)> bias_b;        // b(x) on (1, inf)
    std::function<double(double)> h_inverse;     // inverse of -log(survival), t > 0
    std::function<double(double)> log_survival;  // log(1 - F(x)) on the real line

    double survival(double x) const { return std::exp(log_survival(x)); }
    double cdf(double x) const { return -std::expm1(log_survival(x)); }
};

namespace detail {

inline double get_param(const std::map<std::string, double>& given,
                        std::map<std::string, double>& resolved, const std::string& key,
                        double def) {
    auto it = given.find(key);
    const double v = (it == given.end()) ? def : it->second;
    if (!std::isfinite(v)) fail(errc::bad_param, "model parameter '" + key + "' is not finite");
    resolved[key] = v;
    return v;
}

inline void reject_unknown_params(const std::map<std::string, double>& given,
                                  const std::map<std::string, double>& resolved,
                                  const std::string& family) {
    for (const auto& [key, value] : given) {
        (void)value;
        if (resolved.find(key) == resolved.end())
            fail(errc::bad_param, "unknown parameter '" + key + "' for model " + family);
    }
}

inline void require_positive(double v, const std::string& what) {
    if (!(v > 0.0)) fail(errc::bad_param, what + " must be positive");
}

}  // namespace detail

inline TailModel make_model(const std::string& family,
                            const std::map<std::string, double>& params = {}) {
    TailModel m;
    m.name = family;
    if (family == "weibull") {
        const double alpha = detail::get_param(params, m.params, "alpha", 1.0);
        const double lambda = detail::get_param(params, m.params, "lambda", 1.0);
        detail::require_positive(alpha, "weibull alpha");
        detail::require_positive(lambda, "weibull lambda");
        m.theta = 1.0 / alpha;
        m.rho = std::nullopt;
        m.support_lo = 0.0;
        m.bias_b = [](double) { return 0.0; };
        const double inv_alpha = 1.0 / alpha;
        m.h_inverse = [alpha, lambda, inv_alpha](double t) {
            return (alpha == 1.0) ? lambda * t : lambda * std::pow(t, inv_alpha);
        };
        m.log_survival = [alpha, lambda](double x) {
            return (x <= 0.0) ? 0.0 : -std::pow(x / lambda, alpha);
        };
    } else if (family == "gaussian") {
        const double mu = detail::get_param(params, m.params, "mu", 0.0);
        const double sigma2 = detail::get_param(params, m.params, "sigma2", 1.0);
        detail::require_positive(sigma2, "gaussian sigma2");
        const double sigma = std::sqrt(sigma2);
        m.theta = 0.5;
        m.rho = -1.0;
        m.support_lo = -std::numeric_limits<double>::infinity();
        m.bias_b = [](double x) { return 0.25 * std::log(x) / x; };
        m.h_inverse = [mu, sigma](double t) { return mu + sigma * norm_h_inverse(t); };
        m.log_survival = [mu, sigma](double x) { return norm_log_sf((x - mu) / sigma); };
    } else if (family == "gamma") {
        const double beta = detail::get_param(params, m.params, "beta", 1.0);  // rate
        const double alpha = detail::get_param(params, m.params, "alpha", 1.0);  // shape
        detail::require_positive(beta, "gamma beta");
        detail::require_positive(alpha, "gamma alpha");
        m.theta = 1.0;
        m.rho = -1.0;
        m.support_lo = 0.0;
        m.bias_b = [alpha](double x) { return (1.0 - alpha) * std::log(x) / x; };
        const double inv_rate = 1.0 / beta;
        if (alpha == 1.0) {
            // exponential: identical arithmetic to weibull(1, 1/beta)
            m.h_inverse = [inv_rate](double t) { return inv_rate * t; };
        } else {
            m.h_inverse = [alpha, inv_rate](double t) {
                auto f = [alpha](double y) { return -gamma_log_sf(alpha, y); };
                auto df = [alpha](double y) {
                    return std::exp((alpha - 1.0) * std::log(y) - y - std::lgamma(alpha) -
                                    gamma_log_sf(alpha, y));
                };
                double hi = std::max(alpha, 1.0) + 2.0 * t;
                int guard = 0;
                while (f(hi) < t) {
                    hi *= 2.0;
                    if (++guard > 200)
                        fail(errc::inversion_failed, "gamma h_inverse: bracket expansion failed");
                }
                const double y =
                    detail::solve_increasing(f, df, t, 0.0, hi, alpha + t,
                                             1e-12 * std::max(1.0, t));
                return inv_rate * y;
            };
        }
        m.log_survival = [alpha, beta](double x) {
            return (x <= 0.0) ? 0.0 : gamma_log_sf(alpha, beta * x);
        };
    } else if (family == "benktander2") {
        const double alpha = detail::get_param(params, m.params, "alpha", 1.0);
        const double tau = detail::get_param(params, m.params, "tau", 0.5);
        detail::require_positive(alpha, "benktander2 alpha");
        if (!(tau > 0.0 && tau <= 1.0))
            fail(errc::bad_param, "benktander2 tau must lie in (0, 1]");
        m.theta = 1.0 / tau;
        m.rho = -1.0;
        m.support_lo = 1.0;
        m.bias_b = [tau](double x) { return ((1.0 - tau) / (tau * tau)) * std::log(x) / x; };
        // survival normalized to 1 at the left endpoint:
        //   -log S(x) = (1-tau) log x + (alpha/tau) (x^tau - 1),  x >= 1
        auto Hfun = [alpha, tau](double x) {
            const double lx = std::log(x);
            return (1.0 - tau) * lx + (alpha / tau) * std::expm1(tau * lx);
        };
        if (tau == 1.0) {
            m.h_inverse = [alpha](double t) { return 1.0 + t / alpha; };
        } else {
            m.h_inverse = [alpha, tau, Hfun](double t) {
                auto dH = [alpha, tau](double x) {
                    return (1.0 - tau) / x + alpha * std::pow(x, tau - 1.0);
                };
                const double hi = std::pow(1.0 + tau * t / alpha, 1.0 / tau);
                return detail::solve_increasing(Hfun, dH, t, 1.0, hi, hi,
                                                1e-12 * std::max(1.0, t));
            };
        }
        m.log_survival = [Hfun](double x) { return (x <= 1.0) ? 0.0 : -Hfun(x); };
    } else if (family == "logistic") {
        detail::reject_unknown_params(params, m.params, family);
        m.theta = 1.0;
        m.rho = -1.0;
        m.support_lo = 0.0;
        const double log2 = std::log(2.0);
        m.bias_b = [log2](double x) { return -log2 / x; };
        m.h_inverse = [](double t) { return t + std::log1p(-std::expm1(-t)); };
        m.log_survival = [log2](double x) {
            if (x <= 0.0) return 0.0;
            // log(2/(1+e^x)) with a stable softplus
            return log2 - (x + std::log1p(std::exp(-x)));
        };
    } else if (family == "evd") {
        const double mu = detail::get_param(params, m.params, "mu", 0.0);
        m.theta = 1.0;
        m.rho = -1.0;
        m.support_lo = -std::numeric_limits<double>::infinity();
        m.bias_b = [mu](double x) { return -mu / x; };
        m.h_inverse = [mu](double t) {
            if (t < 10.0) return mu - std::log(-std::log(-std::expm1(-t)));
            // -log(1-e^{-t}) = e^{-t} (1 + w/2 + w^2/3 + ...), w = e^{-t}
            const double w = std::exp(-t);
            return mu + t - std::log1p(w * (0.5 + w * (1.0 / 3.0 + w * 0.25)));
        };
        m.log_survival = [mu](double x) {
            // S(x) = 1 - exp(-exp(mu - x))
            const double g = std::exp(mu - x);
            return std::log(-std::expm1(-g));
        };
    } else {
        fail(errc::unknown_model, "unknown model family '" + family + "'");
    }
    detail::reject_unknown_params(params, m.params, family);
    return m;
}

// Parse "family" or "family:key=value,key=value" into a model.
inline TailModel parse_model(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    if (family.empty()) fail(errc::unknown_model, "empty model spec");
    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        std::size_t pos = colon + 1;
        while (pos < spec.size()) {
            std::size_t comma = spec.find(',', pos);
            if (comma == std::string::npos) comma = spec.size();
            const std::string item = spec.substr(pos, comma - pos);
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                fail(errc::bad_param, "model parameter '" + item + "' is not key=value");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            double v = 0.0;
            const char* first = val.data();
            const char* last = val.data() + val.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last)
                fail(errc::bad_param, "cannot parse value for parameter '" + key + "'");
            params[key] = v;
            pos = comma + 1;
        }
    }
    return make_model(family, params);
}

// F^{-1}(u) = H^{-1}(-log(1-u)).
inline double quantile(const TailModel& m, double u) {
    if (!(u > 0.0 && u < 1.0)) fail(errc::domain_error, "quantile: u must lie in (0,1)");
    return m.h_inverse(-std::log1p(-u));
}

// n i.i.d. inverse-transform draws from a seeded stream, sorted on ingest.
inline SortedSample sample(const TailModel& m, std::size_t n, std::uint64_t seed) {
    if (n < 1) fail(errc::empty_sample, "sample: need n >= 1");
    splitmix64 gen(seed);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = quantile(m, gen.next_unit());
    return SortedSample::ingest(std::move(v));
}

// First-order bias b(log n) predicted by the limiting law's centering.
inline double predicted_bias(const TailModel& m, std::size_t n) {
    if (n < 3) fail(errc::domain_error, "predicted_bias: need n >= 3 so log n > 1");
    return m.bias_b(std::log(static_cast<double>(n)));
}

// The six catalog families with default parameters, in table order.
inline std::vector<TailModel> catalog() {
    return {make_model("weibull"),     make_model("gaussian"), make_model("gamma"),
            make_model("benktander2"), make_model("logistic"), make_model("evd")};
}

}  // namespace wtail
