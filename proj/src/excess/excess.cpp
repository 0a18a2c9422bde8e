#include "firmtrack/excess/excess.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/stats.hpp"

namespace firmtrack::excess {

std::vector<double> excess_series(const ts::MonthlySeries& actual,
                                  const ts::MonthlySeries& forecast,
                                  bool actual_minus_forecast) {
    if (actual.start != forecast.start)
        throw std::invalid_argument("excess_series: misaligned start months");
    if (actual.size() != forecast.size())
        throw std::invalid_argument("excess_series: length mismatch");
    std::vector<double> out(actual.size());
    for (size_t i = 0; i < out.size(); ++i) {
        double d = actual.values[i] - forecast.values[i];
        out[i] = actual_minus_forecast ? d : -d;
    }
    return out;
}

ExcessReport run_counterfactual(const ts::MonthlySeries& series, const CounterfactualConfig& config,
                                const std::string& stratum) {
    if (!(config.train.last < config.eval.first))
        throw std::invalid_argument("run_counterfactual: train window must end before eval window");
    if (config.eval.last < config.eval.first)
        throw std::invalid_argument("run_counterfactual: empty eval window");
    if (series.index_of(config.train.first) < 0 || series.index_of(config.eval.last) < 0)
        throw std::out_of_range("run_counterfactual: series does not cover the configured windows");

    ts::MonthlySeries train = series.window(config.train.first, config.train.last);
    select::SearchResult selected = select::auto_select(train, config.bounds, config.fit_options);

    const int gap = months_between(config.train.last, config.eval.first);  // >= 1
    const int horizon = months_between(config.train.last, config.eval.last);
    ts::Forecast fc = ts::forecast(selected.best, horizon, config.levels);

    ExcessReport report;
    report.stratum = stratum;
    report.convention =
        config.actual_minus_forecast ? "actual_minus_forecast" : "forecast_minus_actual";
    report.selected_spec = selected.best.spec;
    report.aicc = selected.best.aicc;
    report.forecast = fc;

    const double sign = config.actual_minus_forecast ? 1.0 : -1.0;
    const int eval_len = config.eval.length();
    double cumulative = 0.0;
    std::vector<int> eval_horizons;  // 1-based horizon of each eval month
    for (int i = 0; i < eval_len; ++i) eval_horizons.push_back(gap + i);

    for (int i = 0; i < eval_len; ++i) {
        ExcessRow row;
        row.month = config.eval.first.plus_months(i);
        int h = eval_horizons[i];
        row.actual = series.values[series.index_of(row.month)];
        row.forecast = fc.point[h - 1];
        row.excess = sign * (row.actual - row.forecast);
        cumulative += row.excess;
        row.cumulative = cumulative;

        // Var of the cumulative excess over eval months 0..i with the
        // model's correlated multi-step errors.
        double cum_var = 0.0;
        for (int a = 0; a <= i; ++a)
            for (int b = 0; b <= i; ++b)
                cum_var += fc.error_covariance(eval_horizons[a], eval_horizons[b]);

        for (size_t li = 0; li < config.levels.size(); ++li) {
            int level = config.levels[li];
            double z = stats::normal_quantile(0.5 + level / 200.0);
            double half = z * std::sqrt(fc.variance[h - 1]);
            row.bounds[level] = {row.excess - half, row.excess + half};
            double cum_half = z * std::sqrt(cum_var);
            row.cumulative_bounds[level] = {cumulative - cum_half, cumulative + cum_half};
        }
        report.rows.push_back(std::move(row));
    }

    report.cumulative_excess = cumulative;
    if (!report.rows.empty()) report.cumulative_bounds = report.rows.back().cumulative_bounds;
    return report;
}

std::vector<QuarterRow> quarterly_rollup(const ExcessReport& report) {
    if (report.rows.empty()) return {};
    const ts::Forecast& fc = report.forecast;
    // Recover each row's forecast horizon from its month.
    YearMonth fstart = fc.start;

    std::map<std::pair<int, int>, std::vector<size_t>> by_quarter;
    for (size_t i = 0; i < report.rows.size(); ++i) {
        YearMonth m = report.rows[i].month;
        by_quarter[{m.year, (m.month - 1) / 3 + 1}].push_back(i);
    }

    std::vector<QuarterRow> out;
    for (const auto& [key, idxs] : by_quarter) {
        QuarterRow q;
        q.year = key.first;
        q.quarter = key.second;
        q.partial = idxs.size() < 3;
        double var = 0.0;
        std::vector<int> horizons;
        for (size_t i : idxs) {
            const ExcessRow& row = report.rows[i];
            q.actual += row.actual;
            q.forecast += row.forecast;
            q.excess += row.excess;
            horizons.push_back(months_between(fstart, row.month) + 1);
        }
        for (int a : horizons)
            for (int b : horizons) var += fc.error_covariance(a, b);
        for (const auto& [level, unused] : report.cumulative_bounds) {
            (void)unused;
            double z = stats::normal_quantile(0.5 + level / 200.0);
            double half = z * std::sqrt(var);
            q.bounds[level] = {q.excess - half, q.excess + half};
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::string ExcessReport::to_csv() const {
    std::ostringstream os;
    os << "# stratum: " << stratum << '\n';
    os << "# convention: " << convention << '\n';
    os << "# model: " << selected_spec.str() << " aicc " << aicc << '\n';
    os << "# cumulative interval: model-implied covariance of multi-step forecast errors\n";
    os << "month,actual,forecast,excess";
    std::vector<int> levels;
    if (!rows.empty())
        for (const auto& [level, b] : rows.front().bounds) levels.push_back(level);
    for (int level : levels) os << ",lower" << level << ",upper" << level;
    os << ",cumulative";
    for (int level : levels) os << ",cum_lower" << level << ",cum_upper" << level;
    os << '\n';
    os.precision(10);
    for (const auto& r : rows) {
        os << r.month.str() << ',' << r.actual << ',' << r.forecast << ',' << r.excess;
        for (int level : levels) {
            const auto& b = r.bounds.at(level);
            os << ',' << b.lower << ',' << b.upper;
        }
        os << ',' << r.cumulative;
        for (int level : levels) {
            const auto& b = r.cumulative_bounds.at(level);
            os << ',' << b.lower << ',' << b.upper;
        }
        os << '\n';
    }
    return os.str();
}

std::string quarters_to_csv(const std::vector<QuarterRow>& rows) {
    std::ostringstream os;
    os << "quarter,actual,forecast,excess";
    std::vector<int> levels;
    if (!rows.empty())
        for (const auto& [level, b] : rows.front().bounds) levels.push_back(level);
    for (int level : levels) os << ",lower" << level << ",upper" << level;
    os << ",partial\n";
    os.precision(10);
    for (const auto& q : rows) {
        os << q.year << "Q" << q.quarter << ',' << q.actual << ',' << q.forecast << ',' << q.excess;
        for (int level : levels) {
            const auto& b = q.bounds.at(level);
            os << ',' << b.lower << ',' << b.upper;
        }
        os << ',' << (q.partial ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace firmtrack::excess
