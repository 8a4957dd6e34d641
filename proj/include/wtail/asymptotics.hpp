#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"
#include "wtail/error.hpp"
#include "wtail/estimator.hpp"
#include "wtail/normal.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"
#include "wtail/tailmodels.hpp"

namespace wtail {

// Limiting law of k^{1/2}(theta_hat - theta): normal with mean bias_lambda
// and the given variance.  bias_lambda is the finite-sample plug-in
// k^{1/2} b(log n); it is 0 when no model is supplied or b vanishes.
struct LimitLaw {
    double bias_lambda = 0.0;
    double variance = 1.0;
    std::size_t k = 2;
    std::string score_name;
};

inline LimitLaw limit_law(double theta, const ScoreFunction& f, const TailModel* model,
                          std::size_t n, std::size_t k) {
    if (k < 2) fail(errc::bad_k, "limit_law: need k >= 2");
    const double m = mu(f);
    if (std::abs(m) <= 1e-12)
        fail(errc::degenerate_score, "limit_law: score has mu(W) = 0, limit undefined");
    LimitLaw law;
    law.variance = theta * theta * sigma2(f) / (m * m);
    law.k = k;
    law.score_name = f.name;
    if (model) {
        if (n < 3) fail(errc::bad_k, "limit_law: need n >= 3 for the bias plug-in");
        law.bias_lambda = std::sqrt(static_cast<double>(k)) * predicted_bias(*model, n);
    }
    return law;
}

// Two-sided interval from the limit law, with theta_hat plugged into the
// variance and the bias term removed from the center.
inline std::pair<double, double> confidence_interval(double theta_hat, const LimitLaw& law,
                                                     double level) {
    if (!(level > 0.0 && level < 1.0))
        fail(errc::domain_error, "confidence_interval: level must lie in (0,1)");
    if (law.k < 2) fail(errc::bad_k, "confidence_interval: law.k must be >= 2");
    const double sqrt_k = std::sqrt(static_cast<double>(law.k));
    const double center = theta_hat - law.bias_lambda / sqrt_k;
    const double z = norm_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(law.variance) / sqrt_k;
    return {center - half, center + half};
}

// Finite-sample magnitudes standing in for the limit conditions: each should
// be small; the threshold 1.0 is an arbitrary advisory cutoff, not a test of
// the asymptotic statement.
struct ConditionReport {
    std::optional<double> bias_magnitude;  // k^{1/2} |b(log n)|, absent without a model
    double logn_magnitude = 0.0;           // k^{1/2} / log n
    double eps_magnitude = 0.0;            // k^{1/2} * eps_sup
    bool bias_flag = false;
    bool logn_flag = false;
    bool eps_flag = false;
    double threshold = 1.0;
    std::string note;
};

inline ConditionReport condition_diagnostics(const TailModel* model, std::size_t n,
                                             std::size_t k, double eps_sup) {
    if (n < 3 || k < 2 || k > n) fail(errc::bad_k, "condition_diagnostics: invalid (n,k)");
    ConditionReport rep;
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    rep.logn_magnitude = sqrt_k / std::log(static_cast<double>(n));
    rep.eps_magnitude = sqrt_k * eps_sup;
    if (model) rep.bias_magnitude = sqrt_k * std::abs(predicted_bias(*model, n));
    rep.logn_flag = rep.logn_magnitude > rep.threshold;
    rep.eps_flag = rep.eps_magnitude > rep.threshold;
    rep.bias_flag = rep.bias_magnitude && *rep.bias_magnitude > rep.threshold;
    rep.note =
        "heuristic finite-sample magnitudes for limiting conditions; "
        "threshold 1 is advisory";
    return rep;
}

// One-shot estimate with interval and diagnostics, shared by CLI and tests.
struct EstimateReport {
    double theta_hat = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::string score_name;
    double level = 0.95;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double eps_sup = 0.0;
    ConditionReport conditions;
};

inline EstimateReport estimate_with_ci(const SortedSample& s, std::size_t k,
                                       const ScoreFunction& f, double level,
                                       const TailModel* model = nullptr) {
    EstimateReport rep;
    rep.n = s.size();
    rep.k = k;
    rep.score_name = f.name;
    rep.level = level;
    if (f.name == "zipf") {
        rep.theta_hat = theta_zipf(s, k);
        rep.eps_sup = zipf_weights(rep.n, k).eps_sup;
    } else {
        const WeightSequence w = weights_from_score(f, rep.n, k);
        rep.theta_hat = theta_general(s, k, w);
        rep.eps_sup = w.eps_sup;
    }
    const double s2 = sigma2(f);
    const double m = mu(f);
    if (std::abs(m) <= 1e-12) fail(errc::degenerate_score, "estimate_with_ci: mu(W) = 0");
    LimitLaw law;
    law.k = k;
    law.score_name = f.name;
    law.variance = rep.theta_hat * rep.theta_hat * s2 / (m * m);
    law.bias_lambda = model ? std::sqrt(static_cast<double>(k)) * predicted_bias(*model, rep.n)
                            : 0.0;
    const auto [lo, hi] = confidence_interval(rep.theta_hat, law, level);
    rep.ci_lo = lo;
    rep.ci_hi = hi;
    rep.conditions = condition_diagnostics(model, rep.n, k, rep.eps_sup);
    return rep;
}

inline nlohmann::json to_json(const ConditionReport& r) {
    nlohmann::json j;
    if (r.bias_magnitude) j["bias_magnitude"] = *r.bias_magnitude;
    else j["bias_magnitude"] = nullptr;
    j["logn_magnitude"] = r.logn_magnitude;
    j["eps_magnitude"] = r.eps_magnitude;
    j["bias_flag"] = r.bias_flag;
    j["logn_flag"] = r.logn_flag;
    j["eps_flag"] = r.eps_flag;
    j["threshold"] = r.threshold;
    j["note"] = r.note;
    return j;
}

inline nlohmann::json to_json(const EstimateReport& r) {
    nlohmann::json j;
    j["theta_hat"] = r.theta_hat;
    j["n"] = r.n;
    j["k"] = r.k;
    j["score"] = r.score_name;
    j["level"] = r.level;
    j["ci"] = {r.ci_lo, r.ci_hi};
    j["eps_sup"] = r.eps_sup;
    j["conditions"] = to_json(r.conditions);
    return j;
}

}  // namespace wtail
