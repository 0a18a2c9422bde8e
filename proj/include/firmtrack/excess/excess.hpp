#pragma once

#include <map>
#include <string>
#include <vector>

#include "firmtrack/select/stepwise.hpp"
#include "firmtrack/ts/sarima.hpp"

namespace firmtrack::excess {

struct CounterfactualConfig {
    MonthRange train{{2011, 1}, {2020, 1}};
    MonthRange eval{{2020, 3}, {2021, 6}};
    std::vector<int> levels{80, 95};
    select::SearchBounds bounds;
    ts::FitOptions fit_options;
    /// Signed convention: true reports actual - forecast (positive = more
    /// events than projected); false flips sign and bounds.
    bool actual_minus_forecast = true;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

struct ExcessRow {
    YearMonth month;
    double actual = 0.0;
    double forecast = 0.0;
    double excess = 0.0;
    std::map<int, Interval> bounds;            // per confidence level
    double cumulative = 0.0;                   // running sum of excess
    std::map<int, Interval> cumulative_bounds;  // correlated-error variance
};

struct ExcessReport {
    std::string stratum;
    std::string convention;  // "actual_minus_forecast" or "forecast_minus_actual"
    std::vector<ExcessRow> rows;
    double cumulative_excess = 0.0;
    std::map<int, Interval> cumulative_bounds;
    ts::SarimaSpec selected_spec;
    double aicc = 0.0;
    ts::Forecast forecast;  // retained for covariance-aware rollups

    std::string to_csv() const;
};

/// Elementwise signed difference between aligned series; throws on
/// misaligned start months or lengths.
std::vector<double> excess_series(const ts::MonthlySeries& actual,
                                  const ts::MonthlySeries& forecast,
                                  bool actual_minus_forecast = true);

/// Select and fit on the training window only, forecast across the
/// evaluation horizon, and difference against the realized values.
/// Cumulative bounds use the model-implied covariance of multi-step
/// forecast errors.
ExcessReport run_counterfactual(const ts::MonthlySeries& series, const CounterfactualConfig& config,
                                const std::string& stratum = "all");

struct QuarterRow {
    int year = 0;
    int quarter = 0;  // 1..4
    double actual = 0.0;
    double forecast = 0.0;
    double excess = 0.0;
    std::map<int, Interval> bounds;
    bool partial = false;  // quarter not fully covered by the report
};

/// Calendar-quarter sums with bounds recomputed from the summed
/// forecast-error covariance.
std::vector<QuarterRow> quarterly_rollup(const ExcessReport& report);

std::string quarters_to_csv(const std::vector<QuarterRow>& rows);

}  // namespace firmtrack::excess
