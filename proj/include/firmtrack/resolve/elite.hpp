#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "firmtrack/core/yearmonth.hpp"
#include "firmtrack/resolve/identity.hpp"

namespace firmtrack::resolve {

struct EliteTableRow {
    std::string bucket;  // "1".."9", "10+"
    long pre_pandemic_total = 0;
    long created_during = 0;
    double creation_ratio = 0.0;  // created / total; can exceed 1 for 10+
};

/// Ratio table straight from bucket counts (fixture/replication path).
std::vector<EliteTableRow> elite_rows_from_counts(
    const std::vector<std::pair<long, long>>& totals_and_created);

/// Buckets persons by prior firm count at the cutoff (1..9, 10+) and
/// counts their officerships of new firms within the window. A firm is
/// "new" when its earliest appointment evidence across all persons falls
/// inside the window.
std::vector<EliteTableRow> elite_table(const std::vector<ResolvedPerson>& persons,
                                       YearMonth cutoff, MonthRange window);

std::string elite_table_to_csv(const std::vector<EliteTableRow>& rows);

struct SectionExperience {
    std::string section;
    std::string period;  // "pre" or "during"
    double mean = 0.0;
    double lower = 0.0;  // 95% normal-approximation interval
    double upper = 0.0;
    long n = 0;
};

/// Mean prior-firm count of officers founding new firms, per SIC section
/// and period, winsorised at the given empirical (nearest-rank) quantile.
/// Empty cells are omitted.
std::vector<SectionExperience> industry_experience(
    const std::vector<ResolvedPerson>& persons,
    const std::map<std::string, std::string>& company_section, MonthRange pre_window,
    MonthRange during_window, double winsor_quantile = 0.999);

/// Winsorised mean helper shared with tests: values above the nearest-rank
/// quantile are capped at it.
double winsorised_mean(std::vector<double> values, double quantile);

}  // namespace firmtrack::resolve
