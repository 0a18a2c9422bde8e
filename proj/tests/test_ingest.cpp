#include <doctest.h>

#include <sstream>

#include "firmtrack/ingest/normalize.hpp"
#include "firmtrack/ingest/parse.hpp"
#include "firmtrack/ingest/records.hpp"

using namespace firmtrack;
using namespace firmtrack::ingest;

namespace {

const char* kCompanyHeader =
    "CompanyNumber,CompanyName,CompanyStatus,IncorporationDate,DissolutionDate,"
    "SicText_1,SicText_2,SicText_3,SicText_4,RegAddress.PostCode\n";

std::vector<CompanySnapshotRecord> parse_companies(const std::string& body, RejectionLog& log) {
    std::istringstream in(kCompanyHeader + body);
    return parse_company_snapshot(in, YearMonth{2020, 1}, SchemaMap::defaults(), "test.csv", log);
}

}  // namespace

TEST_CASE("well-formed snapshot row yields one record") {
    RejectionLog log;
    auto recs = parse_companies("00000001,Acme Ltd,Active,2019-05-01,,62012,,,,EC1A 1BB\n", log);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].company_id == "00000001");
    CHECK(recs[0].name == "ACME LTD");
    CHECK(recs[0].status == "Active");
    CHECK(recs[0].snapshot_month == YearMonth{2020, 1});
    REQUIRE(recs[0].incorporation_date.has_value());
    CHECK(recs[0].incorporation_date->str() == "2019-05-01");
    REQUIRE(recs[0].postcode.has_value());
    CHECK(*recs[0].postcode == "EC1A 1BB");
    REQUIRE(recs[0].sic_codes.size() == 1);
    CHECK(recs[0].sic_codes[0] == "62012");
    CHECK(log.entries.empty());
}

TEST_CASE("empty postcode is absent, not rejected") {
    RejectionLog log;
    auto recs = parse_companies("00000002,Foo,Active,,,,,,,\n", log);
    REQUIRE(recs.size() == 1);
    CHECK(!recs[0].postcode.has_value());
    CHECK(log.entries.empty());
}

TEST_CASE("impossible calendar date rejects the row") {
    RejectionLog log;
    auto recs = parse_companies("00000003,Bar,Active,2020-02-31,,,,,,\n", log);
    CHECK(recs.empty());
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].reason == "invalid date");
    CHECK(log.entries[0].row == 2);
}

TEST_CASE("sic text with description parses to the five-digit code") {
    RejectionLog log;
    auto recs =
        parse_companies("1,X,Active,,,62012 - Business software,None Supplied,,,\n", log);
    REQUIRE(recs.size() == 1);
    REQUIRE(recs[0].sic_codes.size() == 1);
    CHECK(recs[0].sic_codes[0] == "62012");

    auto bad = parse_companies("2,Y,Active,,,123,,,,\n", log);
    CHECK(bad.empty());
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].reason == "invalid sic code");
}

TEST_CASE("missing mandatory column is fatal") {
    std::istringstream in("Nope,Nada\n1,2\n");
    RejectionLog log;
    CHECK_THROWS_AS(
        parse_company_snapshot(in, YearMonth{2020, 1}, SchemaMap::defaults(), "x.csv", log),
        std::runtime_error);
}

TEST_CASE("parsing is deterministic and order stable") {
    std::string body =
        "3,C3,Active,,,,,,,\n"
        "1,C1,Active,,,,,,,\n"
        "2,C2,Active,,,,,,,\n";
    RejectionLog log1, log2;
    auto a = parse_companies(body, log1);
    auto b = parse_companies(body, log2);
    REQUIRE(a.size() == 3);
    CHECK(a[0].company_id == "3");  // file order preserved
    CHECK(a[1].company_id == "1");
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].company_id == b[i].company_id);
}

TEST_CASE("officer rows parse with optional dob") {
    std::istringstream in(
        "OfficerName,CompanyNumber,DateOfBirth,AppointmentDate,ResignationDate,"
        "CorrespondencePostCode,OfficerType\n"
        "\"SMITH, JOHN\",00000001,1989-01,2020-01-15,,SW1A 1AA,PERSON\n"
        "\"DOE, JANE\",00000002,,2020-02-01,,,PERSON\n"
        "\"NO COMPANY\",,1970-01,,,,PERSON\n");
    RejectionLog log;
    auto recs =
        parse_officer_file(in, YearMonth{2020, 2}, SchemaMap::defaults(), "officers.csv", log);
    REQUIRE(recs.size() == 2);
    REQUIRE(recs[0].birth_month.has_value());
    CHECK(*recs[0].birth_month == YearMonth{1989, 1});
    CHECK(!recs[1].birth_month.has_value());
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].reason == "empty company id");
}

TEST_CASE("resignation before appointment is rejected") {
    std::istringstream in(
        "OfficerName,CompanyNumber,DateOfBirth,AppointmentDate,ResignationDate,"
        "CorrespondencePostCode,OfficerType\n"
        "\"X, Y\",1,,2020-05-01,2020-04-01,,PERSON\n");
    RejectionLog log;
    auto recs = parse_officer_file(in, YearMonth{2020, 5}, SchemaMap::defaults(), "o.csv", log);
    CHECK(recs.empty());
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].reason == "resignation before appointment");
}

TEST_CASE("name normalization strips honorifics and punctuation") {
    auto n = normalize_name("Smith, Dr John  A.");
    CHECK(n.usable);
    CHECK(n.surname == "SMITH");
    CHECK(n.forenames == "JOHN A");
    CHECK(n.first_forename() == "JOHN");

    auto o = normalize_name("o'brien, mary");
    CHECK(o.surname == "OBRIEN");
    CHECK(o.forenames == "MARY");

    auto blank = normalize_name("   ");
    CHECK(!blank.usable);

    auto hyphen = normalize_name("SMITH-JONES, ANNA-MARIE");
    CHECK(hyphen.surname == "SMITH-JONES");
    CHECK(hyphen.forenames == "ANNA-MARIE");

    auto nocomma = normalize_name("JOHN PAUL SMITH");
    CHECK(nocomma.surname == "SMITH");
    CHECK(nocomma.forenames == "JOHN PAUL");
}

TEST_CASE("name normalization is idempotent") {
    for (const char* raw : {"Smith, Dr John A.", "o'brien, mary", "VAN DER BERG, HANS",
                            "  PATEL ,  RAVI  ", "LTD-HOLDER, B."}) {
        auto once = normalize_name(raw);
        auto twice = normalize_name(once.surname + ", " + once.forenames);
        CHECK(once.surname == twice.surname);
        CHECK(once.forenames == twice.forenames);
    }
}

TEST_CASE("corporate token detection is whole-token") {
    CHECK(is_corporate_name("ACME HOLDINGS"));
    CHECK(is_corporate_name("SOMETHING LTD"));
    CHECK(is_corporate_name("ltd something"));  // case-insensitive
    CHECK(is_corporate_name("NON-DESTRUCTIVE TESTING CO"));
    CHECK(!is_corporate_name("JANE DOE"));
    CHECK(!is_corporate_name("LTDX VENTURES"));     // not a whole token
    CHECK(!is_corporate_name("GOLDING SERVICESON"));  // substring only
    CHECK(is_corporate_name("X. SERVICES."));
}

TEST_CASE("corporate partition covers the input exactly") {
    std::vector<OfficerEventRecord> recs(10);
    for (int i = 0; i < 10; ++i) {
        recs[i].company_id = "C" + std::to_string(i);
        recs[i].officer_raw_name = i < 3 ? "ACME HOLDINGS" : "DOE, JANE";
        recs[i].record_month = YearMonth{2020, 1};
    }
    recs[9].registry_marked_corporate = true;  // registry flag wins even for a person name
    auto part = filter_corporate_officers(recs);
    CHECK(part.companies.size() == 4);
    CHECK(part.persons.size() == 6);
    CHECK(part.corporate_share == doctest::Approx(0.4));
}
