#include <doctest.h>

#include <algorithm>
#include <random>

#include "firmtrack/resolve/demographics.hpp"
#include "firmtrack/resolve/elite.hpp"
#include "firmtrack/resolve/identity.hpp"
#include "firmtrack/resolve/levenshtein.hpp"
#include "support/oracles.hpp"

using namespace firmtrack;
using namespace firmtrack::resolve;

namespace {

ingest::OfficerEventRecord officer(const std::string& name, const std::string& company,
                                   std::optional<YearMonth> dob, YearMonth month,
                                   std::optional<Date> appointed = std::nullopt) {
    ingest::OfficerEventRecord r;
    r.officer_raw_name = name;
    r.company_id = company;
    r.birth_month = dob;
    r.record_month = month;
    r.appointment_date = appointed;
    return r;
}

}  // namespace

TEST_CASE("levenshtein spec examples") {
    CHECK(levenshtein("", "ABC") == 3);
    CHECK(levenshtein("KITTEN", "SITTING") == 3);
    CHECK(levenshtein("SAME", "SAME") == 0);
    CHECK(levenshtein("JON", "JOHN") == 1);
    CHECK(levenshtein("JANE", "JOHN") == 3);
}

TEST_CASE("levenshtein equals the brute-force dynamic program on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(0, 12);
    std::uniform_int_distribution<int> ch('A', 'F');  // small alphabet forces collisions
    for (int i = 0; i < 2000; ++i) {
        std::string a, b;
        int la = len(rng), lb = len(rng);
        for (int k = 0; k < la; ++k) a.push_back(static_cast<char>(ch(rng)));
        for (int k = 0; k < lb; ++k) b.push_back(static_cast<char>(ch(rng)));
        CHECK(levenshtein(a, b) == oracles::levenshtein_dp(a, b));
    }
}

TEST_CASE("levenshtein is a metric") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(0, 10);
    std::uniform_int_distribution<int> ch('A', 'E');
    auto random_string = [&]() {
        std::string s;
        int l = len(rng);
        for (int k = 0; k < l; ++k) s.push_back(static_cast<char>(ch(rng)));
        return s;
    };
    for (int i = 0; i < 400; ++i) {
        std::string a = random_string(), b = random_string(), c = random_string();
        int dab = levenshtein(a, b);
        CHECK(dab == levenshtein(b, a));                       // symmetry
        CHECK((dab == 0) == (a == b));                         // identity
        CHECK(dab <= levenshtein(a, c) + levenshtein(c, b));   // triangle
    }
}

TEST_CASE("identical keys merge into one person with two appointments") {
    YearMonth dob{1989, 1};
    std::vector<ingest::OfficerEventRecord> records{
        officer("SMITH, JOHN", "C1", dob, {2019, 5}),
        officer("SMITH, JOHN", "C2", dob, {2020, 7}),
    };
    auto persons = resolve_identities(records, 1);
    REQUIRE(persons.size() == 1);
    CHECK(persons[0].appointments.size() == 2);
    CHECK(persons[0].match_distance == 0);
    CHECK(!persons[0].ambiguous);
}

TEST_CASE("fuzzy merge within threshold, distinct outside") {
    YearMonth dob{1989, 1};
    std::vector<ingest::OfficerEventRecord> records{
        officer("SMITH, JON", "C1", dob, {2019, 5}),
        officer("SMITH, JOHN", "C2", dob, {2020, 7}),
        officer("SMITH, JANE", "C3", dob, {2020, 8}),
    };
    auto persons = resolve_identities(records, 1);
    REQUIRE(persons.size() == 2);
    // JON+JOHN merged (distance 1), JANE separate (distance 3 from JOHN).
    auto merged = std::find_if(persons.begin(), persons.end(),
                               [](const ResolvedPerson& p) { return p.appointments.size() == 2; });
    REQUIRE(merged != persons.end());
    CHECK(merged->match_distance == 1);
    CHECK(merged->name_variants.size() == 2);
}

TEST_CASE("records without dob never link across firms") {
    std::vector<ingest::OfficerEventRecord> records{
        officer("SMITH, JOHN", "C1", std::nullopt, {2019, 5}),
        officer("SMITH, JOHN", "C2", std::nullopt, {2020, 7}),
    };
    auto persons = resolve_identities(records, 3);
    REQUIRE(persons.size() == 2);  // no dob anchor, no cross-firm identity
    CHECK(persons[0].missing_birth_month);
    CHECK(persons[1].missing_birth_month);

    // Repeat monthly rows of the same appointment still collapse.
    std::vector<ingest::OfficerEventRecord> repeats{
        officer("SMITH, JOHN", "C1", std::nullopt, {2019, 5}),
        officer("SMITH, JOHN", "C1", std::nullopt, {2019, 6}),
    };
    auto collapsed = resolve_identities(repeats, 3);
    REQUIRE(collapsed.size() == 1);
    CHECK(collapsed[0].appointments.size() == 1);

    std::vector<ingest::OfficerEventRecord> fuzzy_records{
        officer("SMITH, JON", "C1", std::nullopt, {2019, 5}),
        officer("SMITH, JOHN", "C2", std::nullopt, {2020, 7}),
    };
    auto fuzzy_persons = resolve_identities(fuzzy_records, 3);
    CHECK(fuzzy_persons.size() == 2);  // no fuzzy merging without the dob anchor
}

TEST_CASE("resolution is order-invariant") {
    YearMonth dob{1975, 6};
    std::vector<ingest::OfficerEventRecord> records{
        officer("BROWN, ANNA", "C1", dob, {2019, 1}),
        officer("BROWN, ANA", "C2", dob, {2019, 2}),
        officer("BROWN, HANNA", "C3", dob, {2019, 3}),
        officer("BROWN, ANNA", "C4", dob, {2019, 4}),
        officer("GREEN, BOB", "C5", YearMonth{1960, 2}, {2019, 5}),
    };
    auto base = resolve_identities(records, 1);
    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) { return a.company_id > b.company_id; });
    auto shuffled = resolve_identities(records, 1);
    REQUIRE(base.size() == shuffled.size());
    for (size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].key.first_forename == shuffled[i].key.first_forename);
        CHECK(base[i].key.surname == shuffled[i].key.surname);
        CHECK(base[i].appointments.size() == shuffled[i].appointments.size());
        CHECK(base[i].ambiguous == shuffled[i].ambiguous);
    }
}

TEST_CASE("raising the threshold only merges, never splits") {
    YearMonth dob{1982, 3};
    std::vector<ingest::OfficerEventRecord> records{
        officer("LEE, SAM", "C1", dob, {2019, 1}),   officer("LEE, SAMM", "C2", dob, {2019, 2}),
        officer("LEE, SAMMY", "C3", dob, {2019, 3}), officer("LEE, PAM", "C4", dob, {2019, 4}),
        officer("LEE, TOM", "C5", dob, {2019, 5}),
    };
    size_t prev_count = 100;
    for (int threshold = 0; threshold <= 3; ++threshold) {
        auto persons = resolve_identities(records, threshold);
        CHECK(persons.size() <= prev_count);
        prev_count = persons.size();
    }
}

TEST_CASE("equal-distance links to different clusters are flagged") {
    YearMonth dob{1970, 1};
    // BAB is distance 1 from both BOB and BIB, which are distance 2 apart.
    std::vector<ingest::OfficerEventRecord> records{
        officer("GRAY, BOB", "C1", dob, {2019, 1}),
        officer("GRAY, BIB", "C2", dob, {2019, 2}),
        officer("GRAY, BAB", "C3", dob, {2019, 3}),
    };
    auto persons = resolve_identities(records, 1);
    REQUIRE(persons.size() == 1);  // single-linkage joins all three
    CHECK(persons[0].ambiguous);
}

TEST_CASE("prior firm count is monotone and counts distinct companies") {
    YearMonth dob{1980, 1};
    std::vector<ingest::OfficerEventRecord> records{
        officer("HILL, EVE", "C1", dob, {2010, 5}, Date{2010, 5, 1}),
        officer("HILL, EVE", "C1", dob, {2012, 6}, Date{2012, 6, 1}),  // same firm again
        officer("HILL, EVE", "C2", dob, {2015, 1}, Date{2015, 1, 10}),
        officer("HILL, EVE", "C3", dob, {2020, 4}, Date{2020, 4, 20}),
    };
    auto persons = resolve_identities(records, 1);
    REQUIRE(persons.size() == 1);
    const auto& p = persons[0];
    CHECK(p.prior_firm_count(YearMonth{2010, 5}) == 0);
    CHECK(p.prior_firm_count(YearMonth{2011, 1}) == 1);
    CHECK(p.prior_firm_count(YearMonth{2014, 1}) == 1);  // C1 counted once
    CHECK(p.prior_firm_count(YearMonth{2016, 1}) == 2);
    CHECK(p.prior_firm_count(YearMonth{2021, 1}) == 3);
    int prev = 0;
    for (int i = 0; i < 200; i += 7) {
        int cur = p.prior_firm_count(YearMonth{2009, 1}.plus_months(i));
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("first-time classification") {
    YearMonth dob{1980, 1};
    std::vector<ingest::OfficerEventRecord> records{
        officer("POND, AMY", "C1", dob, {2020, 5}, Date{2020, 5, 2}),
    };
    auto persons = resolve_identities(records, 1);
    REQUIRE(persons.size() == 1);
    CHECK(classify_first_time(persons[0], YearMonth{2020, 5}) == FirstTimeStatus::FirstTime);

    std::vector<ingest::OfficerEventRecord> with_history{
        officer("POND, AMY", "C0", dob, {2010, 1}, Date{2010, 1, 15}),
        officer("POND, AMY", "C1", dob, {2020, 5}, Date{2020, 5, 2}),
    };
    auto experienced = resolve_identities(with_history, 1);
    REQUIRE(experienced.size() == 1);
    CHECK(classify_first_time(experienced[0], YearMonth{2020, 5}) ==
          FirstTimeStatus::AlreadyOfficer);
}

TEST_CASE("age rule: first-of-month birthdays") {
    CHECK(compute_age(YearMonth{1989, 1}, YearMonth{2019, 1}) == 30);
    CHECK(compute_age(YearMonth{1989, 1}, YearMonth{2020, 1}) == 31);
    CHECK(compute_age(YearMonth{1989, 2}, YearMonth{2019, 1}) == 29);  // not yet 30
    CHECK(compute_age(YearMonth{1989, 1}, YearMonth{1989, 12}) == 0);
    CHECK_THROWS_AS(compute_age(YearMonth{1989, 2}, YearMonth{1989, 1}), std::invalid_argument);
}

TEST_CASE("gender vote: majority wins, ties unresolved, permutation-safe") {
    GenderProviderTable a, b, c;
    a.names["ALEX"] = {Gender::Man, 0.9};
    b.names["ALEX"] = {Gender::Man, 0.8};
    c.names["ALEX"] = {Gender::Unresolved, 0.0};
    a.names["ROBIN"] = {Gender::Man, 0.6};
    b.names["ROBIN"] = {Gender::Woman, 0.6};

    std::vector<GenderProviderTable> providers{a, b, c};
    CHECK(infer_gender("ALEX", providers) == Gender::Man);
    CHECK(infer_gender("ROBIN", providers) == Gender::Unresolved);  // 1-1 tie
    CHECK(infer_gender("UNKNOWN NAME", providers) == Gender::Unresolved);

    std::sort(providers.begin(), providers.end(),
              [](const auto& x, const auto& y) { return x.names.size() > y.names.size(); });
    CHECK(infer_gender("ALEX", providers) == Gender::Man);
    CHECK(infer_gender("ROBIN", providers) == Gender::Unresolved);
}

TEST_CASE("region mapping: longest prefix, exclusions") {
    const RegionTable& t = RegionTable::builtin();
    CHECK(t.map_region("EC1A 1BB") == std::string("Greater London"));
    CHECK(t.map_region("E1 7AA") == std::string("Greater London"));
    CHECK(t.map_region("EH1 1AA") == std::string("Scotland"));
    CHECK(t.map_region("CF10 1AA") == std::string("Wales"));
    CHECK(t.map_region("BT1 1AA") == std::string("Northern Ireland"));
    CHECK(t.map_region("M1 1AA") == std::string("North West"));
    CHECK(!t.map_region("ZZ99 9ZZ").has_value());
    CHECK(!t.map_region("").has_value());
    CHECK(!t.map_region("12345").has_value());
}

TEST_CASE("elite ratios from counts") {
    auto rows = elite_rows_from_counts({{10, 3}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].creation_ratio == doctest::Approx(0.30));

    // Synthetic: 10 persons with 1 prior firm, 3 create one firm each.
    YearMonth dob{1980, 1};
    std::vector<ingest::OfficerEventRecord> records;
    for (int i = 0; i < 10; ++i) {
        std::string name = "ELITE, P" + std::string(1, static_cast<char>('A' + i));
        records.push_back(officer(name, "OLD" + std::to_string(i), dob, {2019, 1},
                                  Date{2019, 1, 10}));
        if (i < 3)
            records.push_back(officer(name, "NEW" + std::to_string(i), dob, {2020, 6},
                                      Date{2020, 6, 10}));
    }
    auto persons = resolve_identities(records, 0);
    auto table = elite_table(persons, YearMonth{2020, 2}, MonthRange{{2020, 3}, {2021, 6}});
    REQUIRE(table.size() == 10);
    CHECK(table[0].bucket == "1");
    CHECK(table[0].pre_pandemic_total == 10);
    CHECK(table[0].created_during == 3);
    CHECK(table[0].creation_ratio == doctest::Approx(0.30));
    long total = 0;
    for (const auto& row : table) total += row.pre_pandemic_total;
    CHECK(total == 10);  // buckets partition the persons with >= 1 prior firm
}

TEST_CASE("winsorised mean per the nearest-rank rule") {
    // n=4: the 99.9th percentile is the maximum, so winsorisation is inactive.
    CHECK(winsorised_mean({1, 1, 1, 1000}, 0.999) == doctest::Approx(250.75));
    // n=1000 with 999 ones: the 99.9th percentile is 1 and the outlier caps.
    std::vector<double> big(999, 1.0);
    big.push_back(1e6);
    double wm = winsorised_mean(big, 0.999);
    CHECK(wm == doctest::Approx(1.0));
    double raw = 0;
    for (double v : big) raw += v;
    raw /= big.size();
    CHECK(raw > wm);  // the rule actually changed the mean
    // All equal: mean unchanged.
    CHECK(winsorised_mean({2, 2, 2, 2}, 0.999) == doctest::Approx(2.0));
}

TEST_CASE("industry experience aggregates founding officers per section and period") {
    YearMonth dob{1980, 1};
    std::vector<ingest::OfficerEventRecord> records;
    // Two founders of a new firm in the during window; one has history.
    records.push_back(officer("VET, OLGA", "H1", dob, {2015, 1}, Date{2015, 1, 1}));
    records.push_back(officer("VET, OLGA", "N1", dob, {2020, 6}, Date{2020, 6, 1}));
    records.push_back(officer("NEWBIE, TED", "N1", dob, {2020, 6}, Date{2020, 6, 1}));
    auto persons = resolve_identities(records, 0);
    std::map<std::string, std::string> sections{{"N1", "J"}, {"H1", "C"}};
    auto rows = industry_experience(persons, sections, MonthRange{{2019, 8}, {2020, 2}},
                                    MonthRange{{2020, 3}, {2021, 6}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].section == "J");
    CHECK(rows[0].period == "during");
    CHECK(rows[0].n == 2);
    CHECK(rows[0].mean == doctest::Approx(0.5));  // priors 1 and 0
    CHECK(rows[0].lower <= rows[0].mean);
    CHECK(rows[0].upper >= rows[0].mean);
}
