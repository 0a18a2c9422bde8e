#include <algorithm>
#include <array>
#include <stdexcept>

#include "firmtrack/select/tests.hpp"

namespace firmtrack::select {

// Monte Carlo critical-value tables. Regenerate with:
//   firmtrack-crittab --kpss --ch
// The generator simulates the null distribution of the exact statistics
// implemented in tests.cpp and prints these arrays.
// Generated with 1e6 (KPSS, n=1200) and 1e5 (seasonal stability, n=480)
// replications, seed 20240801.

namespace {

struct LevelRow {
    double level;
    double value;
};

// KPSS, level-stationary null.
constexpr std::array<LevelRow, 3> kKpssLevel = {{{0.10, 0.3468}, {0.05, 0.4582}, {0.01, 0.7274}}};
// KPSS, trend-stationary null.
constexpr std::array<LevelRow, 3> kKpssTrend = {{{0.10, 0.1195}, {0.05, 0.1474}, {0.01, 0.2144}}};

struct ChRow {
    int period;
    double q90;
    double q95;
    double q99;
};

// Joint seasonal-stability statistic over period-1 dummy contrasts.
constexpr std::array<ChRow, 5> kChTable = {{
    {2, 0.3446, 0.4563, 0.7322},
    {3, 0.6045, 0.7380, 1.0457},
    {4, 0.8253, 0.9715, 1.2803},
    {6, 1.2157, 1.3650, 1.6729},
    {12, 2.0444, 2.1518, 2.3462},
}};

double pick_level(const std::array<LevelRow, 3>& rows, double level) {
    for (const auto& r : rows) {
        if (std::abs(r.level - level) < 1e-9) return r.value;
    }
    throw std::invalid_argument("critical value table has levels 0.10, 0.05, 0.01 only");
}

}  // namespace

double kpss_critical_value(KpssTrend trend, double level) {
    return pick_level(trend == KpssTrend::Level ? kKpssLevel : kKpssTrend, level);
}

double ch_critical_value(int period, double level) {
    if (period < 2) throw std::invalid_argument("ch_critical_value: period must be >= 2");
    auto value_of = [&](const ChRow& r) {
        if (std::abs(level - 0.10) < 1e-9) return r.q90;
        if (std::abs(level - 0.05) < 1e-9) return r.q95;
        if (std::abs(level - 0.01) < 1e-9) return r.q99;
        throw std::invalid_argument("ch_critical_value: levels 0.10, 0.05, 0.01 only");
    };
    // Exact period if tabulated, else linear interpolation in (period - 1).
    const ChRow* below = &kChTable.front();
    const ChRow* above = &kChTable.back();
    for (const auto& r : kChTable) {
        if (r.period == period) return value_of(r);
        if (r.period < period) below = &r;
    }
    for (auto it = kChTable.rbegin(); it != kChTable.rend(); ++it) {
        if (it->period > period) above = &*it;
    }
    if (period > above->period) return value_of(*above) * (period - 1.0) / (above->period - 1.0);
    if (period < below->period) return value_of(*below);
    double t = static_cast<double>(period - below->period) / (above->period - below->period);
    return value_of(*below) + t * (value_of(*above) - value_of(*below));
}

}  // namespace firmtrack::select
