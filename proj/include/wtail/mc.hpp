#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wtail/asymptotics.hpp"
#include "wtail/error.hpp"
#include "wtail/estimator.hpp"
#include "wtail/rng.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"
#include "wtail/tailmodels.hpp"

namespace wtail {

// Simulation campaign description.  model_spec keeps the original textual
// form for report echoing; model is the parsed catalog entry.
struct McSpec {
    std::string model_spec;
    TailModel model;
    std::vector<std::string> estimators{"hill"};
    std::size_t n = 0;
    std::vector<std::size_t> k_grid;
    std::size_t replications = 1;
    std::uint64_t base_seed = 1;
};

// Aggregates for one (estimator, k) cell.  Moment fields are absent when no
// replication survived; empirical_variance additionally needs >= 2 survivors.
struct McCell {
    std::string estimator;
    std::size_t k = 0;
    std::size_t used = 0;      // replications included in the moments
    std::size_t failures = 0;  // NonPositiveTail / DegenerateDenominator count
    std::optional<double> mean_theta_hat;
    std::optional<double> empirical_bias;
    std::optional<double> empirical_variance;  // of k^{1/2}(theta_hat - theta)
    std::optional<double> mse;                 // of theta_hat
    double predicted_bias = 0.0;               // b(log n)
    double predicted_variance = 0.0;           // limit-law variance at true theta
    std::optional<double> ks_distance;         // standardized sample vs N(0,1)
};

struct McReport {
    std::string model_spec;
    std::string model_name;
    std::map<std::string, double> model_params;
    double theta_true = 0.0;
    std::size_t n = 0;
    std::size_t replications = 0;
    std::uint64_t base_seed = 0;
    std::string rng = rng_name();
    std::vector<McCell> cells;
};

// Optional test hook replacing the model sampler (e.g. a deterministic
// plug-in sample); must be pure in (n, seed) to preserve determinism.
using SampleHook = std::function<SortedSample(const TailModel&, std::size_t, std::uint64_t)>;

// Standardize replicate estimates by the limiting law:
// z_r = (k^{1/2}(theta_hat_r - theta) - bias_lambda) / sqrt(variance).
inline std::vector<double> standardized_sample(const std::vector<double>& raw_theta_hats,
                                               double theta_true, std::size_t k,
                                               const LimitLaw& law) {
    if (!(law.variance > 0.0))
        fail(errc::degenerate_score, "standardized_sample: law variance must be positive");
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    const double inv_sd = 1.0 / std::sqrt(law.variance);
    std::vector<double> out(raw_theta_hats.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (sqrt_k * (raw_theta_hats[i] - theta_true) - law.bias_lambda) * inv_sd;
    return out;
}

// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
// of xs and the given CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) fail(errc::empty_sample, "ks_distance: empty sample");
    std::sort(xs.begin(), xs.end());
    const double m = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 1; i <= xs.size(); ++i) {
        const double F = cdf(xs[i - 1]);
        d = std::max(d, std::max(F - (static_cast<double>(i) - 1.0) / m,
                                 static_cast<double>(i) / m - F));
    }
    return d;
}

namespace detail {

inline ScoreFunction resolve_score(const std::string& name,
                                   const std::vector<ScoreFunction>& custom) {
    if (name == "hill") return hill_score();
    if (name == "zipf") return zipf_score();
    for (const auto& f : custom)
        if (f.name == name) return f;
    fail(errc::bad_spec, "unknown estimator/score '" + name + "'");
}

inline void validate_mc_spec(const McSpec& spec, const std::vector<ScoreFunction>& custom) {
    if (spec.replications < 1) fail(errc::bad_spec, "mc: replications must be >= 1");
    if (spec.n < 3) fail(errc::bad_spec, "mc: need n >= 3");
    if (spec.k_grid.empty()) fail(errc::bad_spec, "mc: k_grid is empty");
    if (spec.estimators.empty()) fail(errc::bad_spec, "mc: no estimators requested");
    bool wants_zipf = false;
    for (const auto& e : spec.estimators) {
        resolve_score(e, custom);  // throws on unknown names
        wants_zipf = wants_zipf || (e == "zipf");
    }
    for (std::size_t j = 0; j < spec.k_grid.size(); ++j) {
        const std::size_t k = spec.k_grid[j];
        if (k < 2 || k > spec.n - 1)
            fail(errc::bad_spec, "mc: k = " + std::to_string(k) + " invalid for n = " +
                                     std::to_string(spec.n));
        if (wants_zipf && k < 3)
            fail(errc::bad_spec, "mc: the least-squares estimator needs k >= 3");
        if (j > 0 && spec.k_grid[j] <= spec.k_grid[j - 1])
            fail(errc::bad_spec, "mc: k_grid must be strictly increasing");
    }
}

}  // namespace detail

// Run the campaign.  Replications are independent work units distributed
// over `threads` workers; every per-replication result lands in its own
// preassigned slot and aggregation scans slots in replication order, so the
// report is identical for any worker count.
inline McReport run(const McSpec& spec, unsigned threads = 1, const SampleHook& hook = {},
                    const std::vector<ScoreFunction>& custom_scores = {}) {
    detail::validate_mc_spec(spec, custom_scores);
    const std::size_t reps = spec.replications;
    const std::size_t n_est = spec.estimators.size();
    const std::size_t n_k = spec.k_grid.size();
    const std::size_t n_cells = n_est * n_k;

    // Per-cell weight sequences are reusable across replications.
    std::vector<ScoreFunction> scores;
    scores.reserve(n_est);
    for (const auto& e : spec.estimators) scores.push_back(detail::resolve_score(e, custom_scores));
    std::vector<std::vector<WeightSequence>> weights(n_est);
    for (std::size_t ei = 0; ei < n_est; ++ei) {
        if (spec.estimators[ei] == "hill" || spec.estimators[ei] == "zipf") continue;
        weights[ei].reserve(n_k);
        for (std::size_t kj = 0; kj < n_k; ++kj)
            weights[ei].push_back(weights_from_score(scores[ei], spec.n, spec.k_grid[kj]));
    }

    // Slot arrays: value + error status per (cell, replication).
    constexpr int kOk = -1;
    std::vector<double> slot_value(n_cells * reps, 0.0);
    std::vector<int> slot_err(n_cells * reps, kOk);
    std::vector<std::string> slot_msg(n_cells * reps);

    std::atomic<std::size_t> next_rep{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t r = next_rep.fetch_add(1);
            if (r >= reps) return;
            SortedSample s = hook ? hook(spec.model, spec.n, derive_seed(spec.base_seed, r))
                                  : sample(spec.model, spec.n, derive_seed(spec.base_seed, r));
            for (std::size_t ei = 0; ei < n_est; ++ei) {
                for (std::size_t kj = 0; kj < n_k; ++kj) {
                    const std::size_t slot = (ei * n_k + kj) * reps + r;
                    try {
                        const std::size_t k = spec.k_grid[kj];
                        double th;
                        if (spec.estimators[ei] == "hill") th = theta_hill(s, k);
                        else if (spec.estimators[ei] == "zipf") th = theta_zipf(s, k);
                        else th = theta_general(s, k, weights[ei][kj]);
                        slot_value[slot] = th;
                    } catch (const error& e) {
                        slot_err[slot] = static_cast<int>(e.code());
                        slot_msg[slot] = e.what();
                    }
                }
            }
        }
    };
    const unsigned nw = std::max(1u, threads);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (unsigned t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Deterministic error policy: anything other than the two tolerated
    // data-degeneracy codes aborts the run, lowest replication index first.
    for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t c = 0; c < n_cells; ++c) {
            const int ec = slot_err[c * reps + r];
            if (ec == kOk) continue;
            const errc code = static_cast<errc>(ec);
            if (code != errc::non_positive_tail && code != errc::degenerate_denominator)
                fail(code, slot_msg[c * reps + r]);
        }
    }

    McReport rep;
    rep.model_spec = spec.model_spec;
    rep.model_name = spec.model.name;
    rep.model_params = spec.model.params;
    rep.theta_true = spec.model.theta;
    rep.n = spec.n;
    rep.replications = reps;
    rep.base_seed = spec.base_seed;
    rep.cells.reserve(n_cells);

    const double theta = spec.model.theta;
    for (std::size_t ei = 0; ei < n_est; ++ei) {
        const LimitLaw base_law = limit_law(theta, scores[ei], &spec.model, spec.n, 2);
        for (std::size_t kj = 0; kj < n_k; ++kj) {
            const std::size_t k = spec.k_grid[kj];
            McCell cell;
            cell.estimator = spec.estimators[ei];
            cell.k = k;
            cell.predicted_bias = predicted_bias(spec.model, spec.n);
            cell.predicted_variance = base_law.variance;

            std::vector<double> vals;
            vals.reserve(reps);
            for (std::size_t r = 0; r < reps; ++r) {
                const std::size_t slot = (ei * n_k + kj) * reps + r;
                if (slot_err[slot] == kOk) vals.push_back(slot_value[slot]);
                else ++cell.failures;
            }
            cell.used = vals.size();
            if (!vals.empty()) {
                const double m = static_cast<double>(vals.size());
                // shifted two-pass moments: exact zeros when all values agree
                const double x0 = vals.front();
                long double acc = 0.0L;
                for (double v : vals) acc += static_cast<long double>(v - x0);
                const double mean = x0 + static_cast<double>(acc / static_cast<long double>(m));
                long double acc_var = 0.0L, acc_mse = 0.0L;
                for (double v : vals) {
                    const double dc = v - mean;
                    const double dt = v - theta;
                    acc_var += static_cast<long double>(dc) * dc;
                    acc_mse += static_cast<long double>(dt) * dt;
                }
                cell.mean_theta_hat = mean;
                cell.empirical_bias = mean - theta;
                cell.mse = static_cast<double>(acc_mse / static_cast<long double>(m));
                if (vals.size() >= 2) {
                    const double var_theta =
                        static_cast<double>(acc_var / static_cast<long double>(m));
                    cell.empirical_variance = static_cast<double>(k) * var_theta;
                }
                LimitLaw law = base_law;
                law.k = k;
                law.bias_lambda =
                    std::sqrt(static_cast<double>(k)) * predicted_bias(spec.model, spec.n);
                const std::vector<double> z = standardized_sample(vals, theta, k, law);
                cell.ks_distance = ks_distance(z, [](double x) { return norm_cdf(x); });
            }
            rep.cells.push_back(std::move(cell));
        }
    }
    return rep;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

}  // namespace detail

// Flat CSV, one row per (estimator, k); absent moments are empty fields.
inline std::string to_csv(const McReport& rep) {
    std::ostringstream out;
    out << "estimator,k,replications,used,failures,mean_theta_hat,empirical_bias,"
           "empirical_variance,mse,predicted_bias,predicted_variance,ks_distance\n";
    for (const auto& c : rep.cells) {
        out << c.estimator << ',' << c.k << ',' << rep.replications << ',' << c.used << ','
            << c.failures << ',' << detail::fmt_opt(c.mean_theta_hat) << ','
            << detail::fmt_opt(c.empirical_bias) << ',' << detail::fmt_opt(c.empirical_variance)
            << ',' << detail::fmt_opt(c.mse) << ',' << detail::fmt_double(c.predicted_bias) << ','
            << detail::fmt_double(c.predicted_variance) << ',' << detail::fmt_opt(c.ks_distance)
            << '\n';
    }
    return out.str();
}

inline nlohmann::json to_json(const McReport& rep) {
    nlohmann::json j;
    j["model"] = rep.model_spec.empty() ? rep.model_name : rep.model_spec;
    j["model_name"] = rep.model_name;
    j["model_params"] = rep.model_params;
    j["theta_true"] = rep.theta_true;
    j["n"] = rep.n;
    j["replications"] = rep.replications;
    j["base_seed"] = rep.base_seed;
    j["rng"] = rep.rng;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : rep.cells) {
        nlohmann::json cj;
        cj["estimator"] = c.estimator;
        cj["k"] = c.k;
        cj["used"] = c.used;
        cj["failures"] = c.failures;
        auto put = [&cj](const char* key, const std::optional<double>& v) {
            if (v) cj[key] = *v; else cj[key] = nullptr;
        };
        put("mean_theta_hat", c.mean_theta_hat);
        put("empirical_bias", c.empirical_bias);
        put("empirical_variance", c.empirical_variance);
        put("mse", c.mse);
        cj["predicted_bias"] = c.predicted_bias;
        cj["predicted_variance"] = c.predicted_variance;
        put("ks_distance", c.ks_distance);
        j["cells"].push_back(std::move(cj));
    }
    return j;
}

// Campaign config from JSON: either an explicit "k_grid" array or a
// "k_range" object {start, stop, step}.
inline McSpec parse_mc_spec(const nlohmann::json& j) {
    McSpec spec;
    try {
        if (!j.contains("model") || !j["model"].is_string())
            fail(errc::bad_spec, "mc config: 'model' (string) is required");
        spec.model_spec = j["model"].get<std::string>();
        spec.model = parse_model(spec.model_spec);
        if (!j.contains("n")) fail(errc::bad_spec, "mc config: 'n' is required");
        spec.n = j["n"].get<std::size_t>();
        if (j.contains("estimators")) {
            spec.estimators.clear();
            for (const auto& e : j["estimators"]) spec.estimators.push_back(e.get<std::string>());
        }
        if (j.contains("k_grid")) {
            for (const auto& k : j["k_grid"]) spec.k_grid.push_back(k.get<std::size_t>());
        } else if (j.contains("k_range")) {
            const auto& r = j["k_range"];
            const std::size_t start = r.at("start").get<std::size_t>();
            const std::size_t stop = r.at("stop").get<std::size_t>();
            const std::size_t step = r.contains("step") ? r["step"].get<std::size_t>() : 1;
            if (step == 0) fail(errc::bad_spec, "mc config: k_range step must be positive");
            for (std::size_t k = start; k <= stop; k += step) spec.k_grid.push_back(k);
        } else {
            fail(errc::bad_spec, "mc config: provide 'k_grid' or 'k_range'");
        }
        if (j.contains("replications")) spec.replications = j["replications"].get<std::size_t>();
        if (j.contains("base_seed")) spec.base_seed = j["base_seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        fail(errc::bad_spec, std::string("mc config: ") + e.what());
    }
    return spec;
}

}  // namespace wtail
