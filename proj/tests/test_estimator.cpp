#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "wtail/error.hpp"
#include "wtail/estimator.hpp"
#include "wtail/sample.hpp"
#include "wtail/scorefn.hpp"

using Catch::Approx;

namespace {

wtail::errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const wtail::error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a wtail::error");
}

// Lognormal-ish positive sample, deterministic per seed.
wtail::SortedSample random_sample(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = std::exp(nd(gen));
    return wtail::SortedSample::ingest(std::move(v));
}

}  // namespace

TEST_CASE("abscissa helpers") {
    SECTION("log and loglog ratios") {
        REQUIRE(wtail::log_ratio(100, 1) == Approx(std::log(100.0)).epsilon(1e-15));
        REQUIRE(wtail::log_ratio(100, 100) == 0.0);
        REQUIRE(wtail::loglog_ratio(4, 1) == Approx(0.32663425997828094).epsilon(1e-15));
        REQUIRE(wtail::loglog_ratio(4, 2) == Approx(-0.36651292058166435).epsilon(1e-15));
    }
    SECTION("bounds") {
        REQUIRE_THROWS_AS(wtail::log_ratio(10, 0), wtail::error);
        REQUIRE_THROWS_AS(wtail::log_ratio(10, 11), wtail::error);
        REQUIRE_THROWS_AS(wtail::loglog_ratio(10, 10), wtail::error);
    }
}

TEST_CASE("weighted log-spacings estimator on hand-checked data") {
    // n = 4, k = 2: a single spacing.  theta_hat
    //   = (log e^2 - log e) / (log log 4 - log log 2) = 1 / log 2.
    const auto s = wtail::SortedSample::ingest({0.5, 1.0, std::exp(1.0), std::exp(2.0)});
    wtail::WeightSequence one;
    one.alphas = {1.0};
    const double th = wtail::theta_general(s, 2, one);
    REQUIRE(th == Approx(1.0 / std::log(2.0)).epsilon(1e-14));
    REQUIRE(wtail::theta_hill(s, 2) == th);
}

TEST_CASE("plug-in order statistics are recovered exactly") {
    SECTION("unit exponent is exact to the bit") {
        const auto s = wtail::ideal_order_statistics(1000, 1.0);
        // Numerator and denominator are built from identical doubles.
        REQUIRE(wtail::theta_hill(s, 2) == 1.0);
        REQUIRE(wtail::theta_hill(s, 17) == 1.0);
        REQUIRE(wtail::theta_hill(s, 999) == 1.0);
    }
    SECTION("both estimators recover any exponent across all k") {
        for (double theta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const std::size_t n = 1000;
            const auto s = wtail::ideal_order_statistics(n, theta);
            const auto hill = wtail::theta_hill_all_k(s);
            const auto zipf = wtail::theta_zipf_all_k(s);
            REQUIRE(hill.size() == n - 2);
            for (std::size_t k = 2; k <= n - 1; ++k) {
                REQUIRE(hill[k - 2] == Approx(theta).margin(1e-10));
                if (k >= 3) REQUIRE(zipf[k - 2] == Approx(theta).margin(1e-10));
            }
            REQUIRE(std::isnan(zipf[0]));  // least-squares slope needs k >= 3
            // spot checks against the pointwise routines
            REQUIRE(wtail::theta_hill(s, 50) == Approx(theta).margin(1e-10));
            REQUIRE(wtail::theta_zipf(s, 50) == Approx(theta).margin(1e-10));
        }
    }
}

TEST_CASE("estimator invariances") {
    const auto s = random_sample(500, 7u);
    SECTION("scale invariance") {
        for (double c : {1e-12, 3.0, 1e9}) {
            std::vector<double> scaled = s.values();
            for (auto& x : scaled) x *= c;
            const auto sc = wtail::SortedSample::ingest(std::move(scaled));
            REQUIRE(wtail::theta_hill(sc, 60) ==
                    Approx(wtail::theta_hill(s, 60)).epsilon(1e-12));
            REQUIRE(wtail::theta_zipf(sc, 60) ==
                    Approx(wtail::theta_zipf(s, 60)).epsilon(1e-12));
        }
    }
    SECTION("unit weights and the score route agree to the bit") {
        const auto ws = wtail::weights_from_score(wtail::hill_score(), s.size(), 60);
        REQUIRE(wtail::theta_hill(s, 60) == wtail::theta_general(s, 60, ws));
    }
    SECTION("a constant sample has zero slope") {
        const auto flat = wtail::SortedSample::ingest(std::vector<double>(10, 5.0));
        REQUIRE(wtail::theta_hill(flat, 5) == 0.0);
    }
}

TEST_CASE("least-squares route matches its weighted form") {
    // The regression weights reproduce the least-squares slope up to the
    // eps-level cancellation in sum(alpha) ~ 0.
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto s = random_sample(800, seed);
        for (std::size_t k : {3ul, 10ul, 97ul, 200ul}) {
            const auto ws = wtail::zipf_weights(s.size(), k);
            const double direct = wtail::theta_zipf(s, k);
            const double viaw = wtail::theta_general(s, k, ws);
            REQUIRE(viaw == Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("regression weight sequence") {
    SECTION("k = 2 centers a single abscissa to exactly zero") {
        const auto ws = wtail::zipf_weights(100, 2);
        REQUIRE(ws.alphas.size() == 1);
        REQUIRE(ws.alphas[0] == 0.0);
    }
    SECTION("weights sum to zero up to rounding") {
        const auto ws = wtail::zipf_weights(5000, 100);
        double sum = 0.0, norm1 = 0.0;
        for (double a : ws.alphas) {
            sum += a;
            norm1 += std::abs(a);
        }
        REQUIRE(std::abs(sum) <= 1e-12 * norm1);
    }
    SECTION("distance to the limiting log score") {
        // frozen value for n = 10^6, k = 100
        const auto ws = wtail::zipf_weights(1000000, 100);
        REQUIRE(ws.eps_sup == Approx(0.7647939096691993).epsilon(1e-13));
    }
}

TEST_CASE("abscissa centroid and mean gap") {
    SECTION("hand values at n = 4, k = 2") {
        REQUIRE(wtail::zeta_n(4, 2) == Approx(0.32663425997828094).epsilon(1e-15));
        REQUIRE(wtail::tau_n(4, 2) == Approx(std::log(2.0)).epsilon(1e-14));
    }
    SECTION("frozen value at n = 5000, k = 100") {
        REQUIRE(wtail::tau_n(5000, 100) == Approx(0.20747799600390078).epsilon(1e-14));
    }
    SECTION("the gap is positive and shrinks in n") {
        REQUIRE(wtail::tau_n(1000, 50) > 0.0);
        REQUIRE(wtail::tau_n(100000, 50) < wtail::tau_n(1000, 50));
    }
    SECTION("tau_n * log(n/k) approaches one") {
        const double t = wtail::tau_n(10000000, 100);
        REQUIRE(t * wtail::log_ratio(10000000, 100) == Approx(1.0).margin(0.15));
    }
}

TEST_CASE("second-order integral K_rho") {
    REQUIRE(wtail::k_rho(std::exp(1.0), 0.0) == Approx(1.0).epsilon(1e-15));
    REQUIRE(wtail::k_rho(1.0, -2.5) == 0.0);
    REQUIRE(wtail::k_rho(1.0, 0.0) == 0.0);
    REQUIRE(wtail::k_rho(2.0, -1.0) == Approx(0.5).epsilon(1e-14));
    // continuous as rho -> 0-
    REQUIRE(wtail::k_rho(5.0, -1e-12) == Approx(std::log(5.0)).margin(1e-9));
    REQUIRE_THROWS_AS(wtail::k_rho(0.5, -1.0), wtail::error);
    REQUIRE_THROWS_AS(wtail::k_rho(2.0, 0.5), wtail::error);
}

TEST_CASE("quantile plot pairs") {
    SECTION("plug-in data lies on a line of slope theta") {
        const auto s = wtail::ideal_order_statistics(200, 0.75);
        const auto pts = wtail::qq_pairs(s, 40);
        REQUIRE(pts.size() == 39);
        for (std::size_t j = 1; j < pts.size(); ++j) {
            const double slope = (pts[j].ordinate - pts[j - 1].ordinate) /
                                 (pts[j].abscissa - pts[j - 1].abscissa);
            REQUIRE(slope == Approx(0.75).margin(1e-9));
        }
    }
    SECTION("first abscissa is log log n") {
        const auto s = wtail::ideal_order_statistics(50, 1.0);
        const auto pts = wtail::qq_pairs(s, 2);
        REQUIRE(pts.size() == 1);
        REQUIRE(pts[0].abscissa == Approx(std::log(std::log(50.0))).epsilon(1e-14));
    }
}

TEST_CASE("estimator error paths") {
    const auto s = random_sample(50, 11u);
    wtail::WeightSequence one;
    one.alphas = {1.0};
    SECTION("k bounds") {
        REQUIRE(code_of([&] { wtail::theta_hill(s, 1); }) == wtail::errc::bad_k);
        REQUIRE(code_of([&] { wtail::theta_hill(s, 50); }) == wtail::errc::bad_k);
        REQUIRE(code_of([&] { wtail::theta_zipf(s, 2); }) == wtail::errc::bad_k);
    }
    SECTION("weight length must be k-1") {
        REQUIRE(code_of([&] { wtail::theta_general(s, 5, one); }) ==
                wtail::errc::bad_epsilon);
    }
    SECTION("non-positive tail") {
        const auto t = wtail::SortedSample::ingest({-1.0, -0.5, 1.0, 2.0, 3.0});
        REQUIRE(code_of([&] { wtail::theta_hill(t, 4); }) ==
                wtail::errc::non_positive_tail);
        REQUIRE(wtail::theta_hill(t, 3) > 0.0);  // top three entries are positive
    }
    SECTION("all-zero weights are degenerate") {
        wtail::WeightSequence zero;
        zero.alphas.assign(9, 0.0);
        REQUIRE(code_of([&] { wtail::theta_general(s, 10, zero); }) ==
                wtail::errc::degenerate_denominator);
    }
}

TEST_CASE("all-k sweeps") {
    SECTION("sweeps agree with pointwise evaluation") {
        const auto s = random_sample(300, 23u);
        const auto hill = wtail::theta_hill_all_k(s);
        const auto zipf = wtail::theta_zipf_all_k(s);
        for (std::size_t k : {2ul, 3ul, 37ul, 150ul, 299ul}) {
            REQUIRE(hill[k - 2] == Approx(wtail::theta_hill(s, k)).epsilon(1e-10));
            if (k >= 3) REQUIRE(zipf[k - 2] == Approx(wtail::theta_zipf(s, k)).epsilon(1e-10));
        }
    }
    SECTION("non-positive entries truncate the sweep with NaN markers") {
        const auto s = wtail::SortedSample::ingest({-1.0, 0.0, 1.0, 2.0, std::exp(1.0), 7.0});
        const auto hill = wtail::theta_hill_all_k(s);
        REQUIRE(hill.size() == 4);
        REQUIRE_FALSE(std::isnan(hill[0]));
        REQUIRE_FALSE(std::isnan(hill[2]));  // k = 4 still excludes the zero
        REQUIRE(std::isnan(hill[3]));        // k = 5 would take log of zero
    }
    SECTION("minimum sample size") {
        const auto s = wtail::SortedSample::ingest({1.0, 2.0});
        REQUIRE_THROWS_AS(wtail::theta_hill_all_k(s), wtail::error);
    }
}
