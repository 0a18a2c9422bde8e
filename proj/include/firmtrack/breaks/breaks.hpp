#pragma once

#include <optional>
#include <string>
#include <vector>

#include "firmtrack/ts/series.hpp"

namespace firmtrack::breaks {

struct BreakResult {
    std::string test;
    double statistic = 0.0;
    std::vector<YearMonth> break_dates;  // ordered, strictly inside the sample
    bool significant = false;            // decision at the configured level
    double p_value = -1.0;               // < 0 when the test reports none
    std::string note;
};

/// Recursive-residual CUSUM against the 5% crossing boundaries for a
/// mean-only model. Statistic is max |W_r| / boundary(r); a value above 1
/// is a crossing and the first crossing month is reported.
BreakResult cusum_test(const ts::MonthlySeries& series, double level = 0.05);

/// Chow F test for a mean shift at a known candidate month. Throws when a
/// segment would have fewer than 2 observations.
BreakResult chow_test(const ts::MonthlySeries& series, YearMonth candidate, double level = 0.05);

/// Bai-Perron style global SSR-minimizing segmentation (mean-shift model)
/// by dynamic programming, break count chosen by BIC.
BreakResult bai_perron(const ts::MonthlySeries& series, int max_breaks = 5,
                       double min_segment = 0.15);

/// Pettitt rank test; ties handled through midranks. Approximate p-value
/// from the standard exponential bound.
BreakResult pettitt_test(const ts::MonthlySeries& series, double level = 0.05);

enum class ZaModel { Intercept, Trend, Both };

/// Zivot-Andrews minimum-t unit-root test with an endogenous break,
/// candidates trimmed 15% from both ends. Requires n >= 30.
BreakResult zivot_andrews(const ts::MonthlySeries& series, ZaModel model = ZaModel::Intercept,
                          int lags = 0, double level = 0.05);

/// Shipped Monte Carlo critical values for the Zivot-Andrews minimum t
/// statistic (left tail). Regenerate with firmtrack-crittab.
double za_critical_value(ZaModel model, int n, double level);

/// Subtracts per-month means estimated on [train_first, train_last].
ts::MonthlySeries seasonally_adjust(const ts::MonthlySeries& series, YearMonth train_first,
                                    YearMonth train_last);

struct BatteryRow {
    std::string series_name;
    std::string test;
    BreakResult result;
    bool error = false;
    std::string error_message;
};

/// All five tests over each named series; per-test failures become error
/// rows and the battery continues.
std::vector<BatteryRow> run_battery(
    const std::vector<std::pair<std::string, ts::MonthlySeries>>& series_set,
    YearMonth chow_candidate, double level = 0.05);

std::string battery_to_csv(const std::vector<BatteryRow>& rows);

}  // namespace firmtrack::breaks
