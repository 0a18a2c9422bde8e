#pragma once

#include <istream>

#include "firmtrack/ingest/records.hpp"

namespace firmtrack::ingest {

/// Parses one monthly company snapshot. Well-formed rows become records in
/// file order; malformed rows are logged and skipped. A missing mandatory
/// column is a fatal schema error (throws std::runtime_error).
std::vector<CompanySnapshotRecord> parse_company_snapshot(std::istream& in, YearMonth month,
                                                          const SchemaMap& schema,
                                                          const std::string& file_label,
                                                          RejectionLog& rejections);

std::vector<OfficerEventRecord> parse_officer_file(std::istream& in, YearMonth month,
                                                   const SchemaMap& schema,
                                                   const std::string& file_label,
                                                   RejectionLog& rejections);

/// Loads every `companies_YYYY-MM.csv` / `officers_YYYY-MM.csv` under the
/// two directories, restricted to `window` when given. Company and officer
/// month lists must agree where both exist.
SnapshotArchive load_archive(const std::filesystem::path& snapshots_dir,
                             const std::filesystem::path& officers_dir, const SchemaMap& schema,
                             const std::optional<MonthRange>& window = std::nullopt);

/// Normalized columnar outputs (one file for all months), and the loaders
/// used by downstream stages.
void write_normalized_companies(const std::filesystem::path& path,
                                const SnapshotArchive& archive);
void write_normalized_officers(const std::filesystem::path& path, const SnapshotArchive& archive);
std::vector<CompanySnapshotRecord> load_normalized_companies(const std::filesystem::path& path);
std::vector<OfficerEventRecord> load_normalized_officers(const std::filesystem::path& path);

}  // namespace firmtrack::ingest
