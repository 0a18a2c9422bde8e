#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "firmtrack/core/csv.hpp"
#include "firmtrack/core/hash.hpp"
#include "firmtrack/core/kv_config.hpp"
#include "firmtrack/core/linalg.hpp"
#include "firmtrack/core/optim.hpp"
#include "firmtrack/core/stats.hpp"
#include "firmtrack/core/strings.hpp"
#include "firmtrack/core/yearmonth.hpp"

using namespace firmtrack;

TEST_CASE("year-month parsing and arithmetic") {
    auto ym = YearMonth::parse("2020-03");
    REQUIRE(ym.has_value());
    CHECK(ym->year == 2020);
    CHECK(ym->month == 3);
    CHECK(ym->str() == "2020-03");
    CHECK(ym->plus_months(10).str() == "2021-01");
    CHECK(ym->plus_months(-3).str() == "2019-12");
    CHECK(months_between(*ym, YearMonth{2021, 3}) == 12);
    CHECK(!YearMonth::parse("2020-13"));
    CHECK(!YearMonth::parse("garbage"));

    auto range = MonthRange::parse("2019-08:2020-02");
    REQUIRE(range.has_value());
    CHECK(range->length() == 7);
    CHECK(range->contains(YearMonth{2019, 12}));
    CHECK(!range->contains(YearMonth{2020, 3}));
}

TEST_CASE("calendar dates validate real calendars") {
    CHECK(Date::parse("2020-02-29").has_value());   // leap year
    CHECK(!Date::parse("2019-02-29").has_value());  // not a leap year
    CHECK(!Date::parse("2020-02-31").has_value());
    CHECK(!Date::parse("31/02/2020", DateOrder::DayMonthYear).has_value());
    auto d = Date::parse("14/07/1998", DateOrder::DayMonthYear);
    REQUIRE(d.has_value());
    CHECK(d->str() == "1998-07-14");
}

TEST_CASE("csv round trip with quoting") {
    std::ostringstream os;
    write_csv_row(os, {"plain", "with,comma", "with\"quote", "multi\nline", ""});
    std::istringstream is(os.str());
    CsvReader reader(is);
    std::vector<std::string> row;
    REQUIRE(reader.next(row));
    REQUIRE(row.size() == 5);
    CHECK(row[0] == "plain");
    CHECK(row[1] == "with,comma");
    CHECK(row[2] == "with\"quote");
    CHECK(row[3] == "multi\nline");
    CHECK(row[4] == "");
    CHECK(!reader.next(row));
}

TEST_CASE("csv reader handles crlf and quoted commas") {
    std::istringstream is("a,b,c\r\n\"x,y\",\"he said \"\"hi\"\"\",z\r\n");
    CsvReader reader(is);
    std::vector<std::string> row;
    REQUIRE(reader.next(row));
    CHECK(row == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(reader.next(row));
    CHECK(row[0] == "x,y");
    CHECK(row[1] == "he said \"hi\"");
    CHECK(row[2] == "z");
}

TEST_CASE("kv config parsing") {
    auto cfg = KvConfig::parse_text("a = 1\n# comment\n b= two words \nempty_ok =\n");
    CHECK(cfg.get_or("a", "") == "1");
    CHECK(cfg.get_or("b", "") == "two words");
    CHECK(cfg.get_or("empty_ok", "x") == "");
    CHECK(!cfg.get("missing"));
    CHECK_THROWS(KvConfig::parse_text("no equals sign"));
}

TEST_CASE("fnv hash is byte sensitive") {
    CHECK(hash_string_hex("abc") != hash_string_hex("abd"));
    CHECK(hash_string_hex("") != hash_string_hex(std::string_view("\0", 1)));
    CHECK(hash_string_hex("same") == hash_string_hex("same"));
}

TEST_CASE("normal quantile matches cdf") {
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(stats::normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-9));
    for (double p : {0.001, 0.3, 0.77, 0.999}) {
        CHECK(stats::normal_cdf(stats::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("f distribution cdf sanity") {
    // F(1, 10) at 4.96 ~ 0.95 (textbook critical value 4.965).
    CHECK(stats::f_cdf(4.965, 1, 10) == doctest::Approx(0.95).epsilon(1e-3));
    // F(2, 20) median is near 0.718.
    CHECK(stats::f_cdf(0.718, 2, 20) == doctest::Approx(0.5).epsilon(2e-2));
    CHECK(stats::f_cdf(0.0, 3, 7) == 0.0);
}

TEST_CASE("nearest rank quantile") {
    std::vector<double> v{1, 1, 1, 1000};
    CHECK(stats::nearest_rank_quantile(v, 0.999) == 1000);
    CHECK(stats::nearest_rank_quantile(v, 0.5) == 1);
    CHECK(stats::nearest_rank_quantile(v, 0.75) == 1);
}

TEST_CASE("gauss solve against known system") {
    linalg::Mat a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    std::vector<double> x;
    REQUIRE(linalg::solve(a, {5, 10}, x));
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(3.0));

    linalg::Mat singular(2, 2);
    singular(0, 0) = 1;
    singular(0, 1) = 2;
    singular(1, 0) = 2;
    singular(1, 1) = 4;
    CHECK(!linalg::solve(singular, {1, 2}, x));
}

TEST_CASE("nelder-mead and polish minimize rosenbrock") {
    auto rosenbrock = [](const std::vector<double>& x) {
        double a = 1.0 - x[0];
        double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    optim::Options opts;
    opts.max_evaluations = 4000;
    auto res = optim::minimize(rosenbrock, {-1.2, 1.0}, opts);
    CHECK(res.value < 1e-6);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-2));
}
