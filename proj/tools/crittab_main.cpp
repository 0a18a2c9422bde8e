// firmtrack-crittab: Monte Carlo generator for the shipped critical-value
// tables (KPSS, seasonal-stability, Zivot-Andrews minimum-t). Prints C++
// table rows; the results live in src/select/critical_values.cpp and
// src/breaks/za_critical_values.cpp.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "firmtrack/breaks/breaks.hpp"
#include "firmtrack/core/linalg.hpp"
#include "firmtrack/select/tests.hpp"
#include "firmtrack/ts/series.hpp"

using namespace firmtrack;

namespace {

std::vector<double> quantiles(std::vector<double>& draws, const std::vector<double>& probs) {
    std::sort(draws.begin(), draws.end());
    std::vector<double> out;
    for (double p : probs) {
        size_t idx = static_cast<size_t>(p * (draws.size() - 1));
        out.push_back(draws[idx]);
    }
    return out;
}

// The exact statistic implemented in select::kpss_test, sans the decision.
double kpss_statistic(const std::vector<double>& y, bool trend) {
    const int n = static_cast<int>(y.size());
    std::vector<double> e(n);
    if (!trend) {
        double m = 0.0;
        for (double v : y) m += v;
        m /= n;
        for (int t = 0; t < n; ++t) e[t] = y[t] - m;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int t = 0; t < n; ++t) {
            sx += t;
            sy += y[t];
            sxx += static_cast<double>(t) * t;
            sxy += t * y[t];
        }
        double denom = n * sxx - sx * sx;
        double b = (n * sxy - sx * sy) / denom;
        double a = (sy - b * sx) / n;
        for (int t = 0; t < n; ++t) e[t] = y[t] - a - b * t;
    }
    int lag = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25)));
    double ss = 0.0;
    for (double v : e) ss += v * v;
    double lrv = ss / n;
    for (int j = 1; j <= lag; ++j) {
        double w = 1.0 - static_cast<double>(j) / (lag + 1);
        double g = 0.0;
        for (int t = j; t < n; ++t) g += e[t] * e[t - j];
        lrv += 2.0 * w * g / n;
    }
    double cum = 0.0, num = 0.0;
    for (int t = 0; t < n; ++t) {
        cum += e[t];
        num += cum * cum;
    }
    return num / (static_cast<double>(n) * n * lrv);
}

void gen_kpss(int reps, int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> level_draws, trend_draws;
    level_draws.reserve(reps);
    trend_draws.reserve(reps);
    std::vector<double> y(n);
    for (int r = 0; r < reps; ++r) {
        for (double& v : y) v = normal(rng);
        level_draws.push_back(kpss_statistic(y, false));
        trend_draws.push_back(kpss_statistic(y, true));
    }
    auto ql = quantiles(level_draws, {0.90, 0.95, 0.99});
    auto qt = quantiles(trend_draws, {0.90, 0.95, 0.99});
    std::printf("// KPSS, %d reps, n=%d, seed=%llu\n", reps, n,
                static_cast<unsigned long long>(seed));
    std::printf("kKpssLevel = {{{0.10, %.4f}, {0.05, %.4f}, {0.01, %.4f}}};\n", ql[0], ql[1], ql[2]);
    std::printf("kKpssTrend = {{{0.10, %.4f}, {0.05, %.4f}, {0.01, %.4f}}};\n", qt[0], qt[1], qt[2]);
}

void gen_ch(int reps, int n, uint64_t seed) {
    std::printf("// seasonal stability, %d reps, n=%d, seed=%llu\n", reps, n,
                static_cast<unsigned long long>(seed));
    for (int period : {2, 3, 4, 6, 12}) {
        std::mt19937_64 rng(seed + period);
        std::normal_distribution<double> normal;
        std::vector<double> draws;
        draws.reserve(reps);
        std::vector<double> y(n);
        for (int r = 0; r < reps; ++r) {
            for (double& v : y) v = normal(rng);
            // statistic only; decision threshold irrelevant here
            auto res = select::canova_hansen_test(y, period, 0.05);
            draws.push_back(res.statistic);
        }
        auto q = quantiles(draws, {0.90, 0.95, 0.99});
        std::printf("{%d, %.4f, %.4f, %.4f},\n", period, q[0], q[1], q[2]);
    }
}

void gen_za(int reps, uint64_t seed) {
    std::printf("// zivot-andrews min-t, %d reps per cell, seed=%llu\n", reps,
                static_cast<unsigned long long>(seed));
    const char* names[] = {"intercept", "trend", "both"};
    for (int model = 0; model < 3; ++model) {
        std::printf("// model %s\n", names[model]);
        for (int n : {50, 100, 200, 500}) {
            std::mt19937_64 rng(seed + model * 1000 + n);
            std::normal_distribution<double> normal;
            std::vector<double> draws;
            draws.reserve(reps);
            for (int r = 0; r < reps; ++r) {
                ts::MonthlySeries s;
                s.start = YearMonth{2000, 1};
                s.frequency = 12;
                s.values.resize(n);
                double acc = 0.0;
                for (int t = 0; t < n; ++t) {
                    acc += normal(rng);
                    s.values[t] = acc;
                }
                auto res = breaks::zivot_andrews(s, static_cast<breaks::ZaModel>(model), 0, 0.05);
                draws.push_back(res.statistic);
            }
            auto q = quantiles(draws, {0.01, 0.05, 0.10});
            std::printf("{%d, %.3f, %.3f, %.3f},\n", n, q[0], q[1], q[2]);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo critical-value table generator"};
    bool do_kpss = false, do_ch = false, do_za = false, do_all = false;
    int kpss_reps = 1000000, ch_reps = 100000, za_reps = 25000;
    int kpss_n = 1200, ch_n = 480;
    uint64_t seed = 20240801;
    app.add_flag("--kpss", do_kpss);
    app.add_flag("--ch", do_ch);
    app.add_flag("--za", do_za);
    app.add_flag("--all", do_all);
    app.add_option("--kpss-reps", kpss_reps);
    app.add_option("--ch-reps", ch_reps);
    app.add_option("--za-reps", za_reps);
    app.add_option("--kpss-n", kpss_n);
    app.add_option("--ch-n", ch_n);
    app.add_option("--seed", seed);
    CLI11_PARSE(app, argc, argv);

    if (do_all) do_kpss = do_ch = do_za = true;
    if (!do_kpss && !do_ch && !do_za) {
        std::printf("nothing to do; pass --kpss, --ch, --za or --all\n");
        return 1;
    }
    if (do_kpss) gen_kpss(kpss_reps, kpss_n, seed);
    if (do_ch) gen_ch(ch_reps, ch_n, seed);
    if (do_za) gen_za(za_reps, seed);
    return 0;
}
