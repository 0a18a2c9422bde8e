#pragma once

#include <filesystem>
#include <vector>

#include "firmtrack/core/yearmonth.hpp"

namespace firmtrack::ts {

/// Equally spaced monthly observations starting at `start`.
struct MonthlySeries {
    YearMonth start;
    std::vector<double> values;
    int frequency = 12;  // periods per season

    size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    YearMonth month_at(size_t i) const { return start.plus_months(static_cast<int>(i)); }
    YearMonth last_month() const { return month_at(values.size() - 1); }

    /// Index of a month within the series, or -1 if outside.
    int index_of(YearMonth m) const;

    /// Sub-series covering [first, last]; throws if outside the sample.
    MonthlySeries window(YearMonth first, YearMonth last) const;

    /// `month,value` text files, one observation per line, header included.
    static MonthlySeries load_csv(const std::filesystem::path& path, int frequency = 12);
    void save_csv(const std::filesystem::path& path) const;
};

/// Applies seasonal differencing D times followed by ordinary differencing
/// d times. Output length = len - d - D*period. Throws std::length_error
/// when the series is too short.
MonthlySeries difference(const MonthlySeries& series, int d, int D, int period);

}  // namespace firmtrack::ts
