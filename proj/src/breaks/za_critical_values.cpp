#include <cmath>
#include <stdexcept>

#include "firmtrack/breaks/breaks.hpp"

namespace firmtrack::breaks {

// Monte Carlo critical values for the minimum-t statistic, generated from
// driftless random walks at several sample sizes. Regenerate with:
//   firmtrack-crittab --za
// 25000 replications per cell, seed 20240801.

namespace {

struct ZaRow {
    int n;
    double q01;
    double q05;
    double q10;
};

constexpr ZaRow kIntercept[] = {
    {50, -5.582, -4.904, -4.582},
    {100, -5.365, -4.829, -4.543},
    {200, -5.327, -4.777, -4.501},
    {500, -5.285, -4.779, -4.525},
};
constexpr ZaRow kTrend[] = {
    {50, -5.361, -4.671, -4.330},
    {100, -5.117, -4.509, -4.215},
    {200, -4.989, -4.444, -4.153},
    {500, -4.954, -4.410, -4.135},
};
constexpr ZaRow kBoth[] = {
    {50, -5.903, -5.232, -4.902},
    {100, -5.680, -5.120, -4.845},
    {200, -5.593, -5.097, -4.829},
    {500, -5.563, -5.088, -4.831},
};

double pick(const ZaRow* rows, int count, int n, double level) {
    // Nearest sample-size bucket.
    const ZaRow* best = rows;
    for (int i = 1; i < count; ++i) {
        if (std::abs(rows[i].n - n) < std::abs(best->n - n)) best = &rows[i];
    }
    if (std::abs(level - 0.01) < 1e-9) return best->q01;
    if (std::abs(level - 0.05) < 1e-9) return best->q05;
    if (std::abs(level - 0.10) < 1e-9) return best->q10;
    throw std::invalid_argument("za_critical_value: levels 0.10, 0.05, 0.01 only");
}

}  // namespace

double za_critical_value(ZaModel model, int n, double level) {
    switch (model) {
        case ZaModel::Intercept: return pick(kIntercept, 4, n, level);
        case ZaModel::Trend: return pick(kTrend, 4, n, level);
        case ZaModel::Both: return pick(kBoth, 4, n, level);
    }
    throw std::invalid_argument("za_critical_value: bad model");
}

}  // namespace firmtrack::breaks
