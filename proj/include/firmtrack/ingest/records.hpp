#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "firmtrack/core/yearmonth.hpp"

namespace firmtrack::ingest {

/// One row of a monthly company snapshot, normalized.
struct CompanySnapshotRecord {
    std::string company_id;
    std::string name;  // uppercase
    std::string status;
    std::optional<Date> incorporation_date;
    std::optional<Date> dissolution_date;
    std::vector<std::string> sic_codes;  // validated five-digit codes, up to 4
    std::optional<std::string> postcode;
    YearMonth snapshot_month;
};

/// One officer appointment row.
struct OfficerEventRecord {
    std::string officer_raw_name;
    std::string company_id;
    std::optional<YearMonth> birth_month;
    std::optional<Date> appointment_date;
    std::optional<Date> resignation_date;
    std::optional<std::string> correspondence_postcode;
    YearMonth record_month;
    bool registry_marked_corporate = false;
};

struct Rejection {
    std::string file;
    long row = 0;
    std::string reason;
};

struct RejectionLog {
    std::vector<Rejection> entries;

    void add(std::string file, long row, std::string reason) {
        entries.push_back({std::move(file), row, std::move(reason)});
    }
    /// Line-delimited `file,row,reason` text.
    std::string to_text() const;
};

/// Column names of the raw snapshot products, overridable through a
/// key-value mapping file (entries like `company.id = CompanyNumber`).
struct SchemaMap {
    std::map<std::string, std::string> columns;
    DateOrder date_order = DateOrder::Iso;

    static SchemaMap defaults();
    static SchemaMap load(const std::filesystem::path& path);

    const std::string& column(const std::string& field) const;
};

/// Officer records split into people and corporate entities. A record is
/// corporate when the registry classification says so or the name carries
/// one of the corporate tokens as a whole token.
struct CorporatePartition {
    std::vector<OfficerEventRecord> persons;
    std::vector<OfficerEventRecord> companies;
    double corporate_share = 0.0;
};

CorporatePartition filter_corporate_officers(std::vector<OfficerEventRecord> records);

bool is_corporate_name(std::string_view raw_name);
const std::vector<std::string>& corporate_name_tokens();

/// All monthly record streams of a study window with aligned month lists.
struct SnapshotArchive {
    std::vector<YearMonth> months;
    std::vector<std::vector<CompanySnapshotRecord>> companies;  // per month
    std::vector<std::vector<OfficerEventRecord>> officers;      // per month
    RejectionLog rejections;

    /// Months strictly increasing with no gaps; throws otherwise.
    void validate_contiguous() const;
};

}  // namespace firmtrack::ingest
