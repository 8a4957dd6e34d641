#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wtail/error.hpp"
#include "wtail/quadrature.hpp"

namespace wtail {

// Regularity envelope for a score function: |W(x)| <= M x^{-q} and, when the
// derivative is available, |W'(x)| <= M x^{-p-q} on (0,1).  q < 1/2 keeps the
// variance functionals integrable.
struct Envelope {
    double M = 1.0;
    double q = 0.0;
    double p = 0.0;
};

// A score function W on (0,1) plus the metadata the asymptotics need.
// Analytic values of the moment functionals, when known, short-circuit the
// quadrature paths.
struct ScoreFunction {
    std::string name;
    std::function<double(double)> w;
    std::function<double(double)> w_deriv;  // optional; empty when unknown
    Envelope envelope;
    std::optional<double> analytic_mu;
    std::optional<double> analytic_sigma2;
};

inline ScoreFunction make_score(std::string name, std::function<double(double)> w,
                                std::function<double(double)> w_deriv, Envelope env,
                                std::optional<double> analytic_mu = std::nullopt,
                                std::optional<double> analytic_sigma2 = std::nullopt) {
    if (!(env.M > 0.0)) fail(errc::bad_spec, "make_score: envelope M must be positive");
    if (!(env.q >= 0.0 && env.q < 0.5))
        fail(errc::bad_spec, "make_score: envelope exponent q must lie in [0, 1/2)");
    if (!(env.p < 1.0)) fail(errc::bad_spec, "make_score: envelope exponent p must be < 1");
    if (!w) fail(errc::bad_spec, "make_score: score function is empty");
    ScoreFunction f;
    f.name = std::move(name);
    f.w = std::move(w);
    f.w_deriv = std::move(w_deriv);
    f.envelope = env;
    f.analytic_mu = analytic_mu;
    f.analytic_sigma2 = analytic_sigma2;
    return f;
}

// W == 1: reduces the general estimator to the Hill-type form.
inline ScoreFunction hill_score() {
    return make_score(
        "hill", [](double) { return 1.0; }, [](double) { return 0.0; },
        Envelope{1.0, 0.0, 0.0}, 1.0, 1.0);
}

// W(x) = -(log x + 1): the Zipf (quantile-plot regression) score.
// Envelope exponents: |log x + 1| <= 3 x^{-1/4} on (0,1) and |1/x| <= 3 x^{-1/4-3/4}
// hold with margin; p = 3/4 is needed since |W'(x)| = 1/x is not O(x^{-q-1/2}).
inline ScoreFunction zipf_score() {
    return make_score(
        "zipf", [](double x) { return -(std::log(x) + 1.0); },
        [](double x) { return -1.0 / x; }, Envelope{3.0, 0.25, 0.75}, 1.0, 2.0);
}

// Weights alpha_i = W(i/k) + eps_i for i = 1..k-1, with the sup-norm of the
// perturbation recorded for the CLT side conditions.
struct WeightSequence {
    std::vector<double> alphas;
    double eps_sup = 0.0;
};

inline WeightSequence weights_from_score(const ScoreFunction& f, std::size_t n, std::size_t k,
                                         const std::vector<double>* eps = nullptr) {
    if (k < 2 || k > n) fail(errc::bad_k, "weights_from_score: need 2 <= k <= n");
    if (eps && eps->size() != k - 1)
        fail(errc::bad_epsilon, "weights_from_score: eps length must equal k-1");
    WeightSequence ws;
    ws.alphas.resize(k - 1);
    for (std::size_t i = 1; i <= k - 1; ++i) {
        const double e = eps ? (*eps)[i - 1] : 0.0;
        ws.alphas[i - 1] = f.w(static_cast<double>(i) / static_cast<double>(k)) + e;
        ws.eps_sup = std::max(ws.eps_sup, std::abs(e));
    }
    return ws;
}

// mu(W) = int_0^1 W(x) log(1/x) dx.
inline double mu_quadrature(const ScoreFunction& f) {
    return integrate_lower_singular(
        [&](double x) { return f.w(x) * std::log(1.0 / x); }, 1.0);
}

inline double mu(const ScoreFunction& f) {
    if (f.analytic_mu) return *f.analytic_mu;
    return mu_quadrature(f);
}

// sigma2(W) = int_0^1 int_0^1 W(x)W(y) (min(x,y) - xy)/(xy) dx dy.
// The kernel is symmetric, so the square splits at the diagonal:
//   sigma2 = 2 * int_0^1 W(y) (1-y)/y * V(y) dy   with V(y) = int_0^y W(x) dx,
// turning the kinked 2D integral into smooth nested 1D ones.
inline double sigma2_quadrature(const ScoreFunction& f) {
    auto V = [&](double y) {
        return integrate_lower_singular(f.w, y, 1e-13, 1e-15, 1e-11);
    };
    auto outer = [&](double y) { return f.w(y) * ((1.0 - y) / y) * V(y); };
    return 2.0 * integrate_lower_singular(outer, 1.0);
}

inline double sigma2(const ScoreFunction& f) {
    if (f.analytic_sigma2) return *f.analytic_sigma2;
    return sigma2_quadrature(f);
}

// Numeric envelope audit on a log-spaced grid.  Margins are normalized:
// margin = (bound - |value|) / bound, so any negative margin is a violation.
struct EnvelopeReport {
    bool pass = true;
    double worst_value_margin = 1.0;
    double worst_deriv_margin = 1.0;
    double worst_x = 0.0;
};

inline EnvelopeReport check_envelope(const ScoreFunction& f, std::size_t grid_size) {
    if (grid_size < 10) fail(errc::bad_spec, "check_envelope: grid_size must be >= 10");
    EnvelopeReport rep;
    const double lo = 1e-10, hi = 1.0 - 1e-6;
    const double step = std::log(hi / lo) / static_cast<double>(grid_size - 1);
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double x = lo * std::exp(step * static_cast<double>(j));
        const double vb = f.envelope.M * std::pow(x, -f.envelope.q);
        const double vm = (vb - std::abs(f.w(x))) / vb;
        if (vm < rep.worst_value_margin) {
            rep.worst_value_margin = vm;
            rep.worst_x = x;
        }
        if (f.w_deriv) {
            const double db = f.envelope.M * std::pow(x, -(f.envelope.p + f.envelope.q));
            const double dm = (db - std::abs(f.w_deriv(x))) / db;
            if (dm < rep.worst_deriv_margin) {
                rep.worst_deriv_margin = dm;
                rep.worst_x = x;
            }
        }
    }
    rep.pass = rep.worst_value_margin >= 0.0 && rep.worst_deriv_margin >= 0.0;
    return rep;
}

}  // namespace wtail
