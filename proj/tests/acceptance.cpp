// Acceptance checks for the estimator library: ten end-to-end criteria with
// pinned tolerances, one PASS/FAIL line each.  Exit status is the number of
// failed criteria.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wtail/cli.hpp"
#include "wtail/estimator.hpp"
#include "wtail/mc.hpp"
#include "wtail/rng.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"
#include "wtail/tailmodels.hpp"
#include "wtail/wtail.hpp"

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& measured) {
    std::printf("C%d %s: %s (%s)\n", id, pass ? "PASS" : "FAIL", what.c_str(),
                measured.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// C1: numerical quadrature reproduces the analytic moment functionals of the
// built-in scores to 1e-6.
void criterion1() {
    const double tol = 1e-6;
    double worst = 0.0;
    worst = std::max(worst, std::abs(wtail::mu_quadrature(wtail::hill_score()) - 1.0));
    worst = std::max(worst, std::abs(wtail::sigma2_quadrature(wtail::hill_score()) - 1.0));
    worst = std::max(worst, std::abs(wtail::mu_quadrature(wtail::zipf_score()) - 1.0));
    worst = std::max(worst, std::abs(wtail::sigma2_quadrature(wtail::zipf_score()) - 2.0));
    report(1, worst <= tol, "quadrature reproduces analytic mu and sigma2 for built-in scores",
           "max |err| " + fmt(worst) + " <= " + fmt(tol));
}

// C2: the least-squares estimator equals the weighted estimator under its
// regression weights, relative difference <= 1e-12 over 50 random samples.
void criterion2() {
    const double tol = 1e-12;
    const auto model = wtail::make_model("weibull", {{"alpha", 0.7}});
    wtail::splitmix64 pick(424242);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 100 + static_cast<std::size_t>(pick.next_unit() * 4900.0);
        const std::size_t k = 3 + static_cast<std::size_t>(pick.next_unit() *
                                                           static_cast<double>(n / 4 - 3));
        const auto s = wtail::sample(model, n, 1000 + static_cast<std::uint64_t>(rep));
        const double direct = wtail::theta_zipf(s, k);
        const double viaw = wtail::theta_general(s, k, wtail::zipf_weights(n, k));
        worst = std::max(worst, std::abs(viaw - direct) / std::abs(direct));
    }
    report(2, worst <= tol,
           "least-squares and weighted routes agree on 50 random samples",
           "max rel diff " + fmt(worst) + " <= " + fmt(tol));
}

// C3: on plug-in order statistics both estimators recover theta across every
// admissible k, |theta_hat - theta| <= 1e-10.
void criterion3() {
    const double tol = 1e-10;
    double worst = 0.0;
    bool finite = true;
    for (std::size_t n : {std::size_t{1000}, std::size_t{100000}}) {
        for (double theta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const auto s = wtail::ideal_order_statistics(n, theta);
            const auto hill = wtail::theta_hill_all_k(s);
            const auto zipf = wtail::theta_zipf_all_k(s);
            for (std::size_t k = 2; k <= n - 1; ++k) {
                if (!std::isfinite(hill[k - 2])) { finite = false; continue; }
                worst = std::max(worst, std::abs(hill[k - 2] - theta));
                if (k >= 3) {
                    if (!std::isfinite(zipf[k - 2])) { finite = false; continue; }
                    worst = std::max(worst, std::abs(zipf[k - 2] - theta));
                }
            }
        }
    }
    report(3, finite && worst <= tol,
           "plug-in order statistics are inverted exactly for every k",
           "max |err| " + fmt(worst) + " <= " + fmt(tol) +
               (finite ? "" : "; unexpected NaN"));
}

struct Campaign {
    wtail::McCell hill;
    wtail::McCell zipf;
};

Campaign weibull_campaign() {
    wtail::McSpec spec;
    spec.model_spec = "weibull:alpha=2,lambda=1";
    spec.model = wtail::parse_model(spec.model_spec);
    spec.estimators = {"hill", "zipf"};
    spec.n = 5000;
    spec.k_grid = {100};
    spec.replications = 2000;
    spec.base_seed = 20250813;
    const auto rep = wtail::run(spec, 4);
    return {rep.cells[0], rep.cells[1]};
}

// C4: weibull(2,1) campaign, unit-weight estimator: mean near theta = 1/2 and
// the variance of k^{1/2}(theta_hat - theta) inside a window around the
// limiting value theta^2 = 1/4.
void criterion4(const Campaign& c) {
    const double mean = *c.hill.mean_theta_hat;
    const double kvar = *c.hill.empirical_variance;
    const bool ok = mean >= 0.48 && mean <= 0.52 && kvar >= 0.175 && kvar <= 0.325;
    report(4, ok, "unit-weight estimator matches its limit law on weibull(2,1)",
           "mean " + fmt(mean) + " in [0.48,0.52]; scaled var " + fmt(kvar) +
               " in [0.175,0.325]");
}

// C5: same campaign, least-squares estimator: scaled variance inside a window
// around its limiting value 2 theta^2 = 1/2.
void criterion5(const Campaign& c) {
    const double kvar = *c.zipf.empirical_variance;
    const bool ok = kvar >= 0.35 && kvar <= 0.65;
    report(5, ok, "least-squares estimator variance matches its limit law on weibull(2,1)",
           "scaled var " + fmt(kvar) + " in [0.35,0.65]");
}

// C6: same campaign, unit-weight estimator standardized by the limit law is
// close to standard normal in Kolmogorov-Smirnov distance.
void criterion6(const Campaign& c) {
    const double ks = *c.hill.ks_distance;
    const bool ok = ks < 0.05;
    report(6, ok, "standardized unit-weight estimates are near-normal on weibull(2,1)",
           "KS " + fmt(ks) + " < 0.05");
}

// C7: second-order families show the predicted bias: correct sign and
// magnitude within a factor-of-five band of b(log n).
void criterion7() {
    auto cell = [](const std::string& ms) {
        wtail::McSpec spec;
        spec.model_spec = ms;
        spec.model = wtail::parse_model(ms);
        spec.estimators = {"hill"};
        spec.n = 5000;
        spec.k_grid = {100};
        spec.replications = 2000;
        spec.base_seed = 20250813;
        return wtail::run(spec, 4).cells[0];
    };
    const auto g = cell("gaussian");
    const auto l = cell("logistic");
    const double rg = *g.empirical_bias / g.predicted_bias;
    const double rl = *l.empirical_bias / l.predicted_bias;
    const bool sign_ok = (*g.empirical_bias > 0.0) && (g.predicted_bias > 0.0) &&
                         (*l.empirical_bias < 0.0) && (l.predicted_bias < 0.0);
    const bool ok = sign_ok && rg >= 0.2 && rg <= 5.0 && rl >= 0.2 && rl <= 5.0;
    report(7, ok, "empirical bias tracks b(log n) in sign and magnitude",
           "gaussian ratio " + fmt(rg) + ", logistic ratio " + fmt(rl) +
               " in [0.2,5]; signs " + (sign_ok ? "match" : "WRONG"));
}

// C8: the mean abscissa gap obeys tau_n ~ 1/log(n/k) with an explicit
// finite-n error bound.
void criterion8() {
    double worst_excess = -1.0;  // max of |tau_n log(n/k) - 1| - bound
    double worst_val = 0.0, worst_bound = 0.0;
    for (double nd : {1e3, 1e4, 1e5, 1e6, 1e7}) {
        const std::size_t n = static_cast<std::size_t>(nd);
        for (double ex : {0.2, 0.3, 0.5}) {
            const std::size_t k = static_cast<std::size_t>(std::ceil(std::pow(nd, ex)));
            const double dev =
                std::abs(wtail::tau_n(n, k) * wtail::log_ratio(n, k) - 1.0);
            const double kd = static_cast<double>(k);
            const double bound = 3.0 * (std::log(kd) / kd + 1.0 / wtail::log_ratio(n, k));
            if (dev - bound > worst_excess) {
                worst_excess = dev - bound;
                worst_val = dev;
                worst_bound = bound;
            }
        }
    }
    report(8, worst_excess <= 0.0, "mean abscissa gap matches its 1/log(n/k) rate",
           "worst |tau log(n/k) - 1| " + fmt(worst_val) + " <= bound " + fmt(worst_bound));
}

// C9: quantile / distribution round trips hold to 1e-8 for every catalog
// family across moderate and extreme levels.
void criterion9() {
    const double tol = 1e-8;
    const std::vector<wtail::TailModel> models = {
        wtail::make_model("weibull", {{"alpha", 2.0}}),
        wtail::make_model("weibull", {{"alpha", 0.4}, {"lambda", 3.0}}),
        wtail::make_model("gaussian"),
        wtail::make_model("gaussian", {{"mu", 1.0}, {"sigma2", 4.0}}),
        wtail::make_model("gamma", {{"beta", 2.0}, {"alpha", 3.0}}),
        wtail::make_model("gamma", {{"beta", 1.0}, {"alpha", 0.5}}),
        wtail::make_model("benktander2"),
        wtail::make_model("benktander2", {{"alpha", 1.5}, {"tau", 0.25}}),
        wtail::make_model("logistic"),
        wtail::make_model("evd"),
        wtail::make_model("evd", {{"mu", 0.7}}),
    };
    double worst = 0.0;
    for (const auto& m : models) {
        for (double u : {0.5, 0.9, 0.99, 1.0 - 1e-6}) {
            worst = std::max(worst, std::abs(m.cdf(wtail::quantile(m, u)) - u));
        }
    }
    report(9, worst <= tol, "quantile and distribution functions round-trip",
           "max |cdf(q(u)) - u| " + fmt(worst) + " <= " + fmt(tol));
}

// C10: a CLI simulation campaign is byte-identical across worker counts.
void criterion10() {
    const std::vector<std::string> base{"simulate",         "--model",
                                        "weibull:alpha=2",  "--n",
                                        "1000",             "--k-range",
                                        "10:50:20",         "--estimators",
                                        "hill,zipf",        "--replications",
                                        "200",              "--seed",
                                        "31",               "--threads"};
    auto run_with = [&](const std::string& threads, const std::string& prefix) {
        auto args = base;
        args.push_back(threads);
        args.push_back("--output");
        args.push_back(prefix);
        std::ostringstream out, err;
        return wtail::run_cli(args, out, err);
    };
    const int c1 = run_with("1", "tmp_acceptance_t1");
    const int c4 = run_with("4", "tmp_acceptance_t4");
    const std::string csv1 = slurp("tmp_acceptance_t1.csv");
    const std::string csv4 = slurp("tmp_acceptance_t4.csv");
    const std::string js1 = slurp("tmp_acceptance_t1.json");
    const std::string js4 = slurp("tmp_acceptance_t4.json");
    const bool ok = c1 == 0 && c4 == 0 && !csv1.empty() && csv1 == csv4 && js1 == js4;
    report(10, ok, "CLI campaign output is byte-identical for 1 and 4 workers",
           std::string("exit codes ") + std::to_string(c1) + "/" + std::to_string(c4) +
               ", csv " + (csv1 == csv4 ? "identical" : "DIFFER") + ", json " +
               (js1 == js4 ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    const Campaign camp = weibull_campaign();
    criterion4(camp);
    criterion5(camp);
    criterion6(camp);
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("%d of 10 criteria satisfied\n", 10 - g_failures);
    return g_failures;
}
