#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace firmtrack {

/// Calendar month, the basic time unit of every series and record in the
/// pipeline. Stored as (year, month 1..12).
struct YearMonth {
    int year = 0;
    int month = 0;

    constexpr int index() const { return year * 12 + (month - 1); }

    static constexpr YearMonth from_index(int idx) {
        int y = idx / 12;
        int m = idx % 12;
        if (m < 0) {
            m += 12;
            --y;
        }
        return YearMonth{y, m + 1};
    }

    YearMonth plus_months(int n) const { return from_index(index() + n); }

    /// Parses "YYYY-MM". Returns nullopt on malformed input or month
    /// outside 1..12.
    static std::optional<YearMonth> parse(std::string_view s);

    std::string str() const;

    friend constexpr auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

/// b - a in whole months.
inline int months_between(YearMonth a, YearMonth b) { return b.index() - a.index(); }

/// Inclusive month range [first, last].
struct MonthRange {
    YearMonth first;
    YearMonth last;

    bool contains(YearMonth m) const { return first <= m && m <= last; }
    int length() const { return months_between(first, last) + 1; }

    /// Parses "YYYY-MM:YYYY-MM".
    static std::optional<MonthRange> parse(std::string_view s);
    std::string str() const;
};

enum class DateOrder { Iso, DayMonthYear };

/// Full calendar date. Parsing validates the actual calendar (leap years,
/// month lengths), so "2020-02-31" is rejected rather than normalized.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    YearMonth ym() const { return YearMonth{year, month}; }

    static std::optional<Date> parse(std::string_view s, DateOrder order = DateOrder::Iso);
    std::string str() const;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;
};

bool is_valid_date(int year, int month, int day);

}  // namespace firmtrack
