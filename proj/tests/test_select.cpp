#include <doctest.h>

#include <cmath>
#include <random>

#include "firmtrack/select/stepwise.hpp"
#include "firmtrack/select/tests.hpp"
#include "firmtrack/ts/sarima.hpp"

using namespace firmtrack;
using namespace firmtrack::select;
using firmtrack::ts::MonthlySeries;
using firmtrack::ts::SarimaParams;
using firmtrack::ts::SarimaSpec;

namespace {

MonthlySeries gaussian_series(int n, uint64_t seed, double mean = 0.0, double sd = 1.0,
                              int freq = 12) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(mean, sd);
    MonthlySeries s;
    s.start = YearMonth{2005, 1};
    s.frequency = freq;
    s.values.resize(n);
    for (double& v : s.values) v = normal(rng);
    return s;
}

MonthlySeries random_walk(int n, uint64_t seed) {
    auto s = gaussian_series(n, seed);
    double acc = 0;
    for (double& v : s.values) {
        acc += v;
        v = acc;
    }
    return s;
}

}  // namespace

TEST_CASE("kpss: constant series is stationary with statistic zero") {
    std::vector<double> y(50, 3.0);
    auto res = kpss_test(y);
    CHECK(res.statistic == 0.0);
    CHECK(res.stationary);
}

TEST_CASE("kpss: length guard") {
    std::vector<double> y(11, 1.0);
    CHECK_THROWS_AS(kpss_test(y), std::length_error);
}

TEST_CASE("kpss: null rejection near the nominal level, power on random walks") {
    int rejections = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        auto s = gaussian_series(200, 1000 + r);
        if (!kpss_test(s.values).stationary) ++rejections;
    }
    double rate = static_cast<double>(rejections) / reps;
    CHECK(rate > 0.02);
    CHECK(rate < 0.09);

    int power = 0;
    for (int r = 0; r < 200; ++r) {
        auto s = random_walk(500, 5000 + r);
        if (!kpss_test(s.values).stationary) ++power;
    }
    CHECK(power > 180);  // > 90%
}

TEST_CASE("select_d: stationary series 0, random walk 1, capped") {
    int zero_votes = 0, one_votes = 0;
    for (int r = 0; r < 40; ++r) {
        SarimaSpec ar1;
        ar1.p = 1;
        ar1.period = 12;
        SarimaParams params;
        params.phi = {0.5};
        params.sigma2 = 1.0;
        auto stat = ts::simulate(ar1, params, 200, 100 + r);
        if (select_d(stat) == 0) ++zero_votes;
        if (select_d(random_walk(200, 200 + r)) == 1) ++one_votes;
    }
    CHECK(zero_votes >= 32);  // large majority
    CHECK(one_votes >= 32);
    CHECK(select_d(random_walk(200, 1), 0) == 0);  // cap respected
}

TEST_CASE("canova-hansen: stable seasonality accepts, seasonal random walk rejects") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> normal;
    int stable_ok = 0;
    const int reps = 60;
    for (int r = 0; r < reps; ++r) {
        MonthlySeries s;
        s.start = YearMonth{2005, 1};
        s.frequency = 12;
        for (int t = 0; t < 240; ++t)
            s.values.push_back(3.0 * std::sin(2 * M_PI * (t % 12) / 12.0) + 0.5 * normal(rng));
        if (select_D(s, 12) == 0) ++stable_ok;
    }
    CHECK(stable_ok >= reps * 85 / 100);

    int unstable = 0;
    for (int r = 0; r < reps; ++r) {
        // Seasonal random walk: y_t = y_{t-12} + e_t.
        MonthlySeries s;
        s.start = YearMonth{2005, 1};
        s.frequency = 12;
        std::vector<double> vals(240);
        for (int t = 0; t < 240; ++t)
            vals[t] = (t >= 12 ? vals[t - 12] : 0.0) + normal(rng);
        s.values = vals;
        if (select_D(s, 12) == 1) ++unstable;
    }
    CHECK(unstable >= reps * 85 / 100);
}

TEST_CASE("select_D trivial cases") {
    auto s = gaussian_series(60, 3);
    CHECK(select_D(s, 1) == 0);           // period 1
    auto tiny = gaussian_series(20, 4);
    CHECK(select_D(tiny, 12) == 0);       // too short to test
}

TEST_CASE("stepwise: white noise selects a near-empty model") {
    auto s = gaussian_series(300, 11, 5.0, 1.0);
    SearchBounds bounds;
    bounds.max_P = bounds.max_Q = 1;
    auto result = stepwise_search(s, 0, 0, bounds);
    const auto& spec = result.best.spec;
    CHECK(spec.p + spec.q + spec.P + spec.Q <= 1);

    // Compare against the explicit white-noise fit.
    SarimaSpec wn;
    wn.period = 12;
    wn.with_constant = true;
    auto wn_fit = ts::fit(s, wn);
    CHECK(result.best.aicc <= wn_fit.aicc + 2.0);
}

TEST_CASE("stepwise: seeded true spec is never beaten by a worse-scoring winner") {
    SarimaSpec truth;
    truth.p = 1;
    truth.D = 1;
    truth.Q = 1;
    truth.period = 12;
    SarimaParams params;
    params.phi = {0.5};
    params.seasonal_theta = {-0.4};
    params.sigma2 = 1.0;
    auto sim = ts::simulate(truth, params, 240, 909);
    int D = select_D(sim, 12);
    CHECK(D == 1);
    SearchBounds bounds;
    bounds.max_P = bounds.max_Q = 1;
    bounds.max_p = bounds.max_q = 2;
    auto result = stepwise_search(sim, 0, D, bounds, {}, {truth});
    auto true_fit = ts::fit(sim, truth);
    CHECK(result.best.aicc <= true_fit.aicc + 0.01);
}

TEST_CASE("stepwise: budget one returns the best of the start set") {
    auto s = gaussian_series(120, 21);
    SearchBounds bounds;
    bounds.budget = 1;
    auto result = stepwise_search(s, 0, 0, bounds);
    CHECK(result.trace.stopping_reason == "budget exhausted");
    // All visited entries are from the start set (p,q in the start grid).
    for (const auto& e : result.trace.visited) {
        bool in_start = (e.spec.p == 2 && e.spec.q == 2) || (e.spec.p == 0 && e.spec.q == 0) ||
                        (e.spec.p == 1 && e.spec.q == 0) || (e.spec.p == 0 && e.spec.q == 1);
        CHECK(in_start);
    }
    // Winner is the minimum over what was visited.
    double best = 1e300;
    for (const auto& e : result.trace.visited) best = std::min(best, e.aicc);
    CHECK(result.best.aicc == doctest::Approx(best));
}

TEST_CASE("stepwise trace: best-so-far is non-increasing and the winner is the minimum") {
    auto s = random_walk(150, 31);
    SearchBounds bounds;
    auto result = stepwise_search(s, 1, 0, bounds);
    double best_so_far = 1e300;
    double min_all = 1e300;
    for (const auto& e : result.trace.visited) {
        min_all = std::min(min_all, e.aicc);
        if (e.accepted) {
            CHECK(e.aicc <= best_so_far + 1e-9);
            best_so_far = e.aicc;
        }
    }
    CHECK(result.best.aicc == doctest::Approx(min_all));
}

TEST_CASE("stepwise determinism: identical trace on identical input") {
    auto s = gaussian_series(150, 41);
    SearchBounds bounds;
    auto a = stepwise_search(s, 0, 0, bounds);
    auto b = stepwise_search(s, 0, 0, bounds);
    REQUIRE(a.trace.visited.size() == b.trace.visited.size());
    for (size_t i = 0; i < a.trace.visited.size(); ++i) {
        double x = a.trace.visited[i].aicc, y = b.trace.visited[i].aicc;
        CHECK(a.trace.visited[i].spec == b.trace.visited[i].spec);
        CHECK((x == y || (std::isinf(x) && std::isinf(y))));
    }
    CHECK(a.trace.stopping_reason == b.trace.stopping_reason);
}

TEST_CASE("stepwise regret against exhaustive search on small grids") {
    std::mt19937_64 seed_rng(55);
    int within = 0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
        // Random true model with orders <= 2, non-seasonal sample.
        SarimaSpec truth;
        truth.p = r % 3;
        truth.q = (r / 3) % 3;
        truth.period = 1;
        SarimaParams params;
        if (truth.p >= 1) params.phi.push_back(0.5);
        if (truth.p == 2) params.phi.push_back(-0.3);
        if (truth.q >= 1) params.theta.push_back(0.4);
        if (truth.q == 2) params.theta.push_back(0.25);
        params.sigma2 = 1.0;
        auto sim = ts::simulate(truth, params, 200, seed_rng());

        SearchBounds bounds;
        bounds.max_p = bounds.max_q = 2;
        bounds.max_P = bounds.max_Q = 0;
        auto stepwise = stepwise_search(sim, 0, 0, bounds);

        double exhaustive_best = 1e300;
        for (int p = 0; p <= 2; ++p) {
            for (int q = 0; q <= 2; ++q) {
                for (int c = 0; c <= 1; ++c) {
                    SarimaSpec spec;
                    spec.p = p;
                    spec.q = q;
                    spec.period = 1;
                    spec.with_constant = c == 1;
                    try {
                        auto f = ts::fit(sim, spec);
                        if (f.converged) exhaustive_best = std::min(exhaustive_best, f.aicc);
                    } catch (const std::exception&) {
                    }
                }
            }
        }
        if (stepwise.best.aicc <= exhaustive_best + 2.0) ++within;
    }
    CHECK(within >= reps * 9 / 10);
}
