#pragma once

#include <cstdint>
#include <filesystem>

#include "firmtrack/core/yearmonth.hpp"

namespace firmtrack::synth {

/// Parameters of the bundled synthetic registry. The generated tree is a
/// full pipeline input: monthly company snapshots, monthly officer files,
/// gender provider tables, a schema map, and a run configuration.
struct FixtureOptions {
    std::filesystem::path out_dir;
    int months = 36;
    YearMonth start{2018, 1};
    int firms = 5000;
    int officers = 8000;
    uint64_t seed = 42;
    /// Month the firm-creation surge and closure freeze begin.
    YearMonth shock{2020, 3};
};

void write_fixture(const FixtureOptions& options);

}  // namespace firmtrack::synth
