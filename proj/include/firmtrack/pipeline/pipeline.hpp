#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "firmtrack/core/kv_config.hpp"
#include "firmtrack/core/yearmonth.hpp"
#include "firmtrack/select/stepwise.hpp"

namespace firmtrack::pipeline {

/// Thrown for bad configuration (CLI exit code 2).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a stage fails (CLI exit code 3).
struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    std::filesystem::path snapshots_dir;
    std::filesystem::path officers_dir;
    std::filesystem::path out_dir;
    std::filesystem::path gender_tables_dir;
    std::filesystem::path postcode_map;  // empty = builtin table
    std::filesystem::path schema_map;    // empty = default columns

    MonthRange train{{2011, 1}, {2020, 1}};
    MonthRange eval{{2020, 3}, {2021, 6}};
    MonthRange pre_covid{{2019, 8}, {2020, 2}};
    MonthRange during_covid{{2020, 3}, {2021, 6}};
    std::vector<std::string> strata{"none", "sic", "region"};
    int fuzzy_threshold = 1;
    YearMonth elite_cutoff{2020, 2};
    YearMonth chow_candidate{2020, 3};
    select::SearchBounds bounds;
    uint64_t seed = 1;
    int jobs = 1;

    /// Reads keys from a pipeline.conf, resolving relative paths against
    /// the config file's directory.
    static PipelineConfig from_kv(const KvConfig& kv, const std::filesystem::path& base_dir);

    /// Window consistency and path existence; throws ValidationError.
    void validate() const;
};

struct StageRecord {
    std::string stage;
    std::string input_hash;
    std::string output_hash;
    double duration_ms = 0.0;
    std::string status;  // "ran", "cached", "failed", "skipped"
};

struct Manifest {
    std::vector<StageRecord> stages;

    std::string to_json() const;
    static Manifest load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    const StageRecord* find(const std::string& stage) const;
};

/// Runs the staged pipeline (ingest, diff, resolve, series, fit, excess,
/// breaks, report) with hash-based stage caching. Returns the manifest;
/// throws ValidationError / StageError.
Manifest run_pipeline(const PipelineConfig& config);

}  // namespace firmtrack::pipeline
