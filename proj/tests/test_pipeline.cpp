#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "firmtrack/core/kv_config.hpp"
#include "firmtrack/pipeline/pipeline.hpp"
#include "firmtrack/synth/fixture.hpp"

using namespace firmtrack;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("firmtrack_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

pipeline::PipelineConfig fixture_config(const fs::path& fixture, const fs::path& out) {
    KvConfig kv = KvConfig::parse_file(fixture / "pipeline.conf");
    auto cfg = pipeline::PipelineConfig::from_kv(kv, fixture);
    cfg.out_dir = out;
    return cfg;
}

std::map<std::string, std::string> stage_statuses(const pipeline::Manifest& m) {
    std::map<std::string, std::string> out;
    for (const auto& s : m.stages) out[s.stage] = s.status;
    return out;
}

}  // namespace

TEST_CASE("config validation catches missing inputs and window inversions") {
    pipeline::PipelineConfig cfg;
    cfg.snapshots_dir = "/nonexistent/path";
    cfg.officers_dir = "/nonexistent/path";
    cfg.out_dir = "/tmp/never";
    CHECK_THROWS_AS(cfg.validate(), pipeline::ValidationError);

    auto dir = temp_dir("cfg");
    fs::create_directories(dir / "snapshots");
    fs::create_directories(dir / "officers");
    cfg.snapshots_dir = dir / "snapshots";
    cfg.officers_dir = dir / "officers";
    // empty snapshot dir -> validation error before any stage
    CHECK_THROWS_AS(cfg.validate(), pipeline::ValidationError);

    std::ofstream(dir / "snapshots" / "companies_2020-01.csv") << "CompanyNumber\n";
    cfg.train = MonthRange{{2020, 1}, {2020, 6}};
    cfg.eval = MonthRange{{2020, 3}, {2020, 9}};  // overlap
    CHECK_THROWS_AS(cfg.validate(), pipeline::ValidationError);
}

TEST_CASE("tiny three-month fixture runs all eight stages") {
    auto dir = temp_dir("tiny");
    synth::FixtureOptions opt;
    opt.out_dir = dir / "fixture";
    opt.months = 3;
    opt.start = YearMonth{2020, 1};
    opt.shock = YearMonth{2020, 3};
    opt.firms = 40;
    opt.officers = 60;
    opt.seed = 5;
    synth::write_fixture(opt);

    auto cfg = fixture_config(opt.out_dir, dir / "out");
    // Windows that fit in three months.
    cfg.train = MonthRange{{2020, 1}, {2020, 2}};
    cfg.eval = MonthRange{{2020, 3}, {2020, 3}};
    cfg.pre_covid = MonthRange{{2020, 1}, {2020, 2}};
    cfg.during_covid = MonthRange{{2020, 3}, {2020, 3}};
    cfg.elite_cutoff = YearMonth{2020, 2};
    cfg.chow_candidate = YearMonth{2020, 2};
    cfg.bounds.max_p = cfg.bounds.max_q = 0;
    cfg.bounds.max_P = cfg.bounds.max_Q = 0;
    cfg.bounds.budget = 4;

    pipeline::Manifest manifest;
    try {
        manifest = pipeline::run_pipeline(cfg);
    } catch (const pipeline::StageError&) {
        manifest = pipeline::Manifest::load(cfg.out_dir / "manifest.json");
    }
    CHECK(manifest.stages.size() == 8);
    const char* expected[] = {"ingest", "diff",   "resolve", "series",
                              "fit",    "excess", "breaks",  "report"};
    for (size_t i = 0; i < 8; ++i) CHECK(manifest.stages[i].stage == expected[i]);
    // The cheap stages must have run even if a statistical stage failed.
    auto statuses = stage_statuses(manifest);
    CHECK(statuses["ingest"] == "ran");
    CHECK(statuses["diff"] == "ran");
    CHECK(statuses["resolve"] == "ran");
    CHECK(statuses["series"] == "ran");
}

TEST_CASE("stage failure halts downstream stages and is recorded") {
    auto dir = temp_dir("halt");
    synth::FixtureOptions opt;
    opt.out_dir = dir / "fixture";
    opt.months = 3;
    opt.start = YearMonth{2020, 1};
    opt.shock = YearMonth{2020, 3};
    opt.firms = 10;
    opt.officers = 10;
    synth::write_fixture(opt);

    auto cfg = fixture_config(opt.out_dir, dir / "out");
    // Eval window outside the data makes the fit/excess stages fail.
    cfg.train = MonthRange{{2020, 1}, {2020, 2}};
    cfg.eval = MonthRange{{2025, 1}, {2025, 6}};
    cfg.pre_covid = MonthRange{{2020, 1}, {2020, 2}};
    cfg.during_covid = MonthRange{{2025, 1}, {2025, 6}};
    cfg.elite_cutoff = YearMonth{2020, 2};

    CHECK_THROWS_AS(pipeline::run_pipeline(cfg), pipeline::StageError);
    auto manifest = pipeline::Manifest::load(cfg.out_dir / "manifest.json");
    // One stage fails (the eval window lies outside the data, so first the
    // short training window sinks the fit stage) and everything downstream
    // is skipped, never run.
    size_t first_failed = manifest.stages.size();
    for (size_t i = 0; i < manifest.stages.size(); ++i) {
        if (manifest.stages[i].status == "failed") {
            first_failed = i;
            break;
        }
    }
    REQUIRE(first_failed < manifest.stages.size());
    for (size_t i = 0; i < manifest.stages.size(); ++i) {
        if (i < first_failed) CHECK(manifest.stages[i].status == "ran");
        if (i > first_failed) CHECK(manifest.stages[i].status == "skipped");
    }
}

TEST_CASE("second identical run is fully cached") {
    auto dir = temp_dir("cache");
    synth::FixtureOptions opt;
    opt.out_dir = dir / "fixture";
    opt.months = 30;
    opt.start = YearMonth{2018, 1};
    opt.shock = YearMonth{2020, 3};
    opt.firms = 250;
    opt.officers = 300;
    opt.seed = 11;
    synth::write_fixture(opt);

    auto cfg = fixture_config(opt.out_dir, dir / "out");
    auto first = pipeline::run_pipeline(cfg);
    for (const auto& s : first.stages) CHECK(s.status == "ran");

    auto second = pipeline::run_pipeline(cfg);
    for (const auto& s : second.stages) CHECK(s.status == "cached");

    // A single changed input byte invalidates the affected pipeline.
    {
        std::ofstream app(opt.out_dir / "snapshots" / "companies_2018-01.csv", std::ios::app);
        app << "FX,FIRM FX,Active,2017-01-01,,01110,,,,EC1A 1AA\n";
    }
    auto third = pipeline::run_pipeline(cfg);
    auto statuses = stage_statuses(third);
    CHECK(statuses["ingest"] == "ran");
}

TEST_CASE("manifest json round trip") {
    pipeline::Manifest m;
    m.stages.push_back({"ingest", "aaa", "bbb", 12.5, "ran"});
    m.stages.push_back({"diff", "ccc", "ddd", 3.25, "cached"});
    auto dir = temp_dir("manifest");
    m.save(dir / "manifest.json");
    auto loaded = pipeline::Manifest::load(dir / "manifest.json");
    REQUIRE(loaded.stages.size() == 2);
    CHECK(loaded.stages[0].stage == "ingest");
    CHECK(loaded.stages[0].input_hash == "aaa");
    CHECK(loaded.stages[1].duration_ms == doctest::Approx(3.25));
    CHECK(loaded.find("diff") != nullptr);
    CHECK(loaded.find("nope") == nullptr);
}
