#include "firmtrack/core/yearmonth.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace firmtrack {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::optional<YearMonth> YearMonth::parse(std::string_view s) {
    auto dash = s.find('-');
    if (dash == std::string_view::npos) return std::nullopt;
    int y = 0, m = 0;
    if (!parse_int(s.substr(0, dash), y) || !parse_int(s.substr(dash + 1), m)) return std::nullopt;
    if (m < 1 || m > 12) return std::nullopt;
    return YearMonth{y, m};
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

std::optional<MonthRange> MonthRange::parse(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto a = YearMonth::parse(s.substr(0, colon));
    auto b = YearMonth::parse(s.substr(colon + 1));
    if (!a || !b || *b < *a) return std::nullopt;
    return MonthRange{*a, *b};
}

std::string MonthRange::str() const { return first.str() + ":" + last.str(); }

bool is_valid_date(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1) return false;
    static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int max_day = kDays[month - 1];
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) max_day = 29;
    return day <= max_day;
}

std::optional<Date> Date::parse(std::string_view s, DateOrder order) {
    // Accepts YYYY-MM-DD or DD/MM/YYYY style with either separator.
    char sep = order == DateOrder::Iso ? '-' : '/';
    auto p1 = s.find(sep);
    if (p1 == std::string_view::npos) {
        sep = (sep == '-') ? '/' : '-';
        p1 = s.find(sep);
        if (p1 == std::string_view::npos) return std::nullopt;
    }
    auto p2 = s.find(sep, p1 + 1);
    if (p2 == std::string_view::npos) return std::nullopt;
    int a = 0, b = 0, c = 0;
    if (!parse_int(s.substr(0, p1), a) || !parse_int(s.substr(p1 + 1, p2 - p1 - 1), b) ||
        !parse_int(s.substr(p2 + 1), c))
        return std::nullopt;
    Date d;
    if (order == DateOrder::Iso) {
        d = Date{a, b, c};
    } else {
        d = Date{c, b, a};
    }
    if (!is_valid_date(d.year, d.month, d.day)) return std::nullopt;
    return d;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

}  // namespace firmtrack
