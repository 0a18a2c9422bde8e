#pragma once

#include <filesystem>

namespace firmtrack::pipeline {

struct PipelineConfig;

/// Sector summary table (share of women, age composition, Covid/pre-Covid
/// activity ratios, London share) plus plot-data files for the excess
/// counterfactuals. Ratios compare mean monthly rates between the two
/// configured windows; sectors with no pre-window activity are emitted
/// with a note instead of a ratio.
void emit_report(const PipelineConfig& config, const std::filesystem::path& normalized_companies,
                 const std::filesystem::path& normalized_officers,
                 const std::filesystem::path& sector_table_path,
                 const std::filesystem::path& plot_data_dir);

}  // namespace firmtrack::pipeline
