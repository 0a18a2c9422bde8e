#pragma once

#include <span>
#include <vector>

#include "firmtrack/ts/series.hpp"

namespace firmtrack::select {

enum class KpssTrend { Level, Trend };

struct UnitRootResult {
    double statistic = 0.0;
    bool stationary = true;  // null of the KPSS test
    double level = 0.05;
    double critical_value = 0.0;
};

struct SeasonalStabilityResult {
    double statistic = 0.0;
    bool stable = true;  // null: seasonal pattern is stable
    double level = 0.05;
    double critical_value = 0.0;
};

/// KPSS stationarity test. Long-run variance uses the Bartlett kernel with
/// lag floor(4*(n/100)^(1/4)). A numerically constant series yields
/// statistic 0 (stationary). Requires n >= 12.
UnitRootResult kpss_test(std::span<const double> y, KpssTrend trend = KpssTrend::Level,
                         double level = 0.05);

/// Smallest d <= max_d whose d-times-differenced series passes KPSS as
/// stationary; max_d when none do. Series too short to test => 0.
int select_d(const ts::MonthlySeries& series, int max_d = 1, KpssTrend trend = KpssTrend::Level,
             double level = 0.05);

/// Canova-Hansen style test of stable seasonality, built on seasonal dummy
/// contrasts and a Bartlett long-run covariance. Requires n >= 2*period.
SeasonalStabilityResult canova_hansen_test(std::span<const double> y, int period,
                                           double level = 0.05);

/// D = 1 iff the seasonal pattern tests unstable, capped at max_D.
/// period == 1 or a series too short to test => 0.
int select_D(const ts::MonthlySeries& series, int period, int max_D = 1, double level = 0.05);

/// Shipped Monte Carlo critical-value tables (regenerate with the
/// firmtrack-crittab tool).
double kpss_critical_value(KpssTrend trend, double level);
double ch_critical_value(int period, double level);

}  // namespace firmtrack::select
