#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wtail/asymptotics.hpp"
#include "wtail/error.hpp"
#include "wtail/estimator.hpp"
#include "wtail/expr.hpp"
#include "wtail/mc.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"
#include "wtail/tailmodels.hpp"

namespace wtail {

// Exit-code contract: 0 success, 2 usage/input problems, 3 estimation-domain
// failures (data that defeats the method rather than a malformed request).
inline int exit_code_for(errc code) {
    switch (code) {
        case errc::bad_k:
        case errc::non_positive_tail:
        case errc::degenerate_denominator:
        case errc::degenerate_score:
        case errc::domain_error:
        case errc::inversion_failed:
        case errc::integral_diverged:
            return 3;
        case errc::empty_sample:
        case errc::invalid_value:
        case errc::unknown_model:
        case errc::bad_param:
        case errc::bad_epsilon:
        case errc::bad_spec:
            return 2;
    }
    return 2;
}

namespace detail {

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_spec, "cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::bad_spec, "config file '" + path + "': " + e.what());
    }
    return j;
}

// Custom score functions from the config's "scores" array: each entry gives
// {name, expression, optional derivative, M, q, p, optional analytic values}.
inline std::vector<ScoreFunction> scores_from_config(const nlohmann::json& j) {
    std::vector<ScoreFunction> out;
    if (!j.contains("scores")) return out;
    for (const auto& sj : j["scores"]) {
        try {
            const std::string name = sj.at("name").get<std::string>();
            const std::string expr = sj.at("expression").get<std::string>();
            auto w = parse_expression(expr);
            std::function<double(double)> wd;
            if (sj.contains("derivative"))
                wd = parse_expression(sj["derivative"].get<std::string>());
            Envelope env;
            env.M = sj.value("M", 1.0);
            env.q = sj.value("q", 0.0);
            env.p = sj.value("p", 0.0);
            std::optional<double> amu, asig;
            if (sj.contains("analytic_mu")) amu = sj["analytic_mu"].get<double>();
            if (sj.contains("analytic_sigma2")) asig = sj["analytic_sigma2"].get<double>();
            out.push_back(make_score(name, std::move(w), std::move(wd), env, amu, asig));
        } catch (const nlohmann::json::exception& e) {
            fail(errc::bad_spec, std::string("config scores entry: ") + e.what());
        }
    }
    return out;
}

inline ScoreFunction resolve_score_cli(const std::string& name,
                                       const std::vector<ScoreFunction>& custom) {
    if (name == "hill") return hill_score();
    if (name == "zipf") return zipf_score();
    for (const auto& f : custom)
        if (f.name == name) return f;
    fail(errc::bad_spec, "unknown score '" + name + "' (built-ins: hill, zipf)");
}

inline SortedSample load_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_spec, "cannot open input file '" + path + "'");
    return SortedSample::ingest(read_values(in));
}

struct KRange {
    std::size_t start = 0, stop = 0, step = 1;
};

inline KRange parse_k_range(const std::string& text) {
    KRange r;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string::npos ? std::string::npos
                                                                    : colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3)
        fail(errc::bad_spec, "k-range must be start:stop or start:stop:step");
    auto parse_pos = [](const std::string& s, const char* what) {
        std::size_t v = 0;
        const char* first = s.data();
        const char* last = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            fail(errc::bad_spec, std::string("k-range: cannot parse ") + what + " '" + s + "'");
        return v;
    };
    r.start = parse_pos(parts[0], "start");
    r.stop = parse_pos(parts[1], "stop");
    r.step = parts.size() == 3 ? parse_pos(parts[2], "step") : 1;
    if (r.start < 2) fail(errc::bad_spec, "k-range start must be >= 2");
    if (r.step == 0) fail(errc::bad_spec, "k-range step must be >= 1");
    if (r.stop < r.start) fail(errc::bad_spec, "k-range is empty (stop < start)");
    return r;
}

inline void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        fail(errc::bad_spec, "--level must lie strictly between 0 and 1");
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::bad_spec, "cannot open output file '" + path + "'");
    out << text;
}

inline void print_conditions(std::ostream& out, const ConditionReport& c) {
    out << "condition magnitudes (advisory, flag above " << c.threshold << "):\n";
    if (c.bias_magnitude)
        out << "  sqrt(k)*|b(log n)| = " << *c.bias_magnitude
            << (c.bias_flag ? "  [FLAG]" : "") << "\n";
    out << "  sqrt(k)/log(n)     = " << c.logn_magnitude << (c.logn_flag ? "  [FLAG]" : "")
        << "\n";
    out << "  sqrt(k)*eps_sup    = " << c.eps_magnitude << (c.eps_flag ? "  [FLAG]" : "")
        << "\n";
}

}  // namespace detail

// Parsed CLI state shared across subcommands.
struct CliOptions {
    std::string input_path;
    std::string model_spec;
    std::string score = "hill";
    std::string config_path;
    std::string output_path;
    std::string k_range_text;
    std::vector<std::size_t> k_list;
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t replications = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double level = 0.95;
};

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weibull tail-coefficient estimation from upper order statistics"};
    app.require_subcommand(1);
    CliOptions o;

    CLI::App* est = app.add_subcommand("estimate", "Estimate theta from a data file");
    est->add_option("--input", o.input_path, "data file, one value per line")->required();
    est->add_option("--score", o.score, "score function: hill, zipf, or a config-defined name");
    est->add_option("--k", o.k, "number of upper order statistics")->required();
    est->add_option("--model", o.model_spec, "model family for bias diagnostics");
    est->add_option("--level", o.level, "confidence level (default 0.95)");
    est->add_option("--output", o.output_path, "write the report as JSON to this path");
    est->add_option("--config", o.config_path, "JSON config (custom scores)");

    CLI::App* swp = app.add_subcommand("sweep", "Estimate over a range of k");
    swp->add_option("--input", o.input_path)->required();
    swp->add_option("--score", o.score);
    swp->add_option("--k-range", o.k_range_text, "start:stop[:step]")->required();
    swp->add_option("--model", o.model_spec);
    swp->add_option("--level", o.level);
    swp->add_option("--output", o.output_path, "CSV path (default: stdout)");
    swp->add_option("--config", o.config_path);

    CLI::App* qq = app.add_subcommand("qqplot", "Emit quantile-plot pairs as CSV");
    qq->add_option("--input", o.input_path)->required();
    qq->add_option("--k", o.k)->required();
    qq->add_option("--output", o.output_path, "CSV path (default: stdout)");

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo verification campaign");
    sim->add_option("--config", o.config_path, "JSON campaign spec");
    sim->add_option("--model", o.model_spec, "e.g. weibull:alpha=2,lambda=1");
    sim->add_option("--n", o.n, "sample size per replication");
    sim->add_option("--k", o.k_list, "k values (comma separated)")->delimiter(',');
    sim->add_option("--k-range", o.k_range_text, "start:stop[:step]");
    sim->add_option("--estimators", o.score, "comma-separated estimator names (default hill)");
    sim->add_option("--replications", o.replications, "replication count (default 1000)");
    sim->add_option("--seed", o.seed, "base seed (default 1)");
    sim->add_option("--threads", o.threads, "worker threads (default 1)");
    sim->add_option("--output", o.output_path, "path prefix: writes PREFIX.json and PREFIX.csv");

    CLI::App* cat = app.add_subcommand("catalog", "List the built-in tail-model families");
    (void)cat;
    CLI::App* sfi = app.add_subcommand("scorefn-info", "Show score functions and their moments");
    sfi->add_option("--config", o.config_path, "JSON config (custom scores)");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("wtail");
    for (const auto& a : args) argv_storage.push_back(a);
    std::vector<char*> argv;
    argv.reserve(argv_storage.size());
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (est->parsed()) {
            detail::check_level(o.level);
            std::vector<ScoreFunction> custom;
            if (!o.config_path.empty())
                custom = detail::scores_from_config(detail::load_json_file(o.config_path));
            const ScoreFunction f = detail::resolve_score_cli(o.score, custom);
            const SortedSample s = detail::load_sample(o.input_path);
            std::optional<TailModel> model;
            if (!o.model_spec.empty()) model = parse_model(o.model_spec);
            const EstimateReport rep =
                estimate_with_ci(s, o.k, f, o.level, model ? &*model : nullptr);
            out << "theta_hat = " << rep.theta_hat << "\n";
            out << 100.0 * o.level << "% CI = [" << rep.ci_lo << ", " << rep.ci_hi << "]\n";
            out << "n = " << rep.n << "  k = " << rep.k << "  score = " << rep.score_name
                << "  eps_sup = " << rep.eps_sup << "\n";
            detail::print_conditions(out, rep.conditions);
            if (!o.output_path.empty())
                detail::write_text_file(o.output_path, to_json(rep).dump(2) + "\n");
            return 0;
        }

        if (swp->parsed()) {
            detail::check_level(o.level);
            std::vector<ScoreFunction> custom;
            if (!o.config_path.empty())
                custom = detail::scores_from_config(detail::load_json_file(o.config_path));
            const ScoreFunction f = detail::resolve_score_cli(o.score, custom);
            const SortedSample s = detail::load_sample(o.input_path);
            std::optional<TailModel> model;
            if (!o.model_spec.empty()) model = parse_model(o.model_spec);
            const detail::KRange r = detail::parse_k_range(o.k_range_text);
            std::ostringstream csv;
            csv << "k,theta_hat,ci_lo,ci_hi,error\n";
            for (std::size_t k = r.start; k <= r.stop; k += r.step) {
                try {
                    const EstimateReport rep =
                        estimate_with_ci(s, k, f, o.level, model ? &*model : nullptr);
                    csv << k << ',' << detail::fmt_double(rep.theta_hat) << ','
                        << detail::fmt_double(rep.ci_lo) << ',' << detail::fmt_double(rep.ci_hi)
                        << ",\n";
                } catch (const error& e) {
                    csv << k << ",,,," << errc_name(e.code()) << "\n";
                }
            }
            if (o.output_path.empty()) out << csv.str();
            else detail::write_text_file(o.output_path, csv.str());
            return 0;
        }

        if (qq->parsed()) {
            const SortedSample s = detail::load_sample(o.input_path);
            const std::vector<QqPoint> pts = qq_pairs(s, o.k);
            std::ostringstream csv;
            csv << "abscissa,ordinate\n";
            for (const auto& p : pts)
                csv << detail::fmt_double(p.abscissa) << ',' << detail::fmt_double(p.ordinate)
                    << '\n';
            if (o.output_path.empty()) out << csv.str();
            else detail::write_text_file(o.output_path, csv.str());
            return 0;
        }

        if (sim->parsed()) {
            McSpec spec;
            std::vector<ScoreFunction> custom;
            if (!o.config_path.empty()) {
                const nlohmann::json j = detail::load_json_file(o.config_path);
                custom = detail::scores_from_config(j);
                spec = parse_mc_spec(j);
            } else {
                if (o.model_spec.empty() || o.n == 0)
                    fail(errc::bad_spec, "simulate needs --config or --model and --n");
                spec.model_spec = o.model_spec;
                spec.model = parse_model(o.model_spec);
                spec.n = o.n;
                if (!o.k_list.empty()) spec.k_grid = o.k_list;
                else if (!o.k_range_text.empty()) {
                    const detail::KRange r = detail::parse_k_range(o.k_range_text);
                    for (std::size_t k = r.start; k <= r.stop; k += r.step)
                        spec.k_grid.push_back(k);
                } else {
                    fail(errc::bad_spec, "simulate needs --k or --k-range");
                }
                spec.replications = o.replications;
                spec.base_seed = o.seed;
                spec.estimators.clear();
                std::size_t pos = 0;
                while (pos <= o.score.size()) {
                    const std::size_t comma = o.score.find(',', pos);
                    spec.estimators.push_back(o.score.substr(
                        pos, comma == std::string::npos ? std::string::npos : comma - pos));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            }
            const McReport rep = run(spec, o.threads, {}, custom);
            const std::string csv = to_csv(rep);
            if (o.output_path.empty()) {
                out << csv;
            } else {
                detail::write_text_file(o.output_path + ".csv", csv);
                detail::write_text_file(o.output_path + ".json", to_json(rep).dump(2) + "\n");
            }
            return 0;
        }

        if (cat->parsed()) {
            out << "family       params                theta     b(x)                      rho\n";
            out << "weibull      alpha=1, lambda=1     1/alpha   0                         -inf\n";
            out << "gaussian     mu=0, sigma2=1        1/2       (1/4) log(x)/x            -1\n";
            out << "gamma        beta=1, alpha=1       1         (1-alpha) log(x)/x        -1\n";
            out << "benktander2  alpha=1, tau=0.5      1/tau     ((1-tau)/tau^2) log(x)/x  -1\n";
            out << "logistic     (none)                1         -log(2)/x                 -1\n";
            out << "evd          mu=0                  1         -mu/x                     -1\n";
            return 0;
        }

        if (sfi->parsed()) {
            std::vector<ScoreFunction> all{hill_score(), zipf_score()};
            if (!o.config_path.empty()) {
                for (auto& f : detail::scores_from_config(detail::load_json_file(o.config_path)))
                    all.push_back(std::move(f));
            }
            out << "name,M,q,p,mu,sigma2,envelope_ok\n";
            for (const auto& f : all) {
                const EnvelopeReport env = check_envelope(f, 200);
                out << f.name << ',' << f.envelope.M << ',' << f.envelope.q << ','
                    << f.envelope.p << ',' << detail::fmt_double(mu(f)) << ','
                    << detail::fmt_double(sigma2(f)) << ',' << (env.pass ? "yes" : "no") << '\n';
            }
            return 0;
        }
    } catch (const error& e) {
        err << e.what() << "\n";
        return exit_code_for(e.code());
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace wtail
