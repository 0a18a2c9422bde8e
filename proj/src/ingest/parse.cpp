#include "firmtrack/ingest/parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/csv.hpp"
#include "firmtrack/core/strings.hpp"

namespace firmtrack::ingest {

namespace {

/// Column accessor bound to one header; missing optional columns yield
/// empty fields for every row.
class RowView {
public:
    RowView(const std::unordered_map<std::string, size_t>& header, const SchemaMap& schema)
        : header_(header), schema_(schema) {}

    bool has(const std::string& field) const {
        return header_.count(schema_.column(field)) > 0;
    }

    std::string_view get(const std::vector<std::string>& row, const std::string& field) const {
        auto it = header_.find(schema_.column(field));
        if (it == header_.end() || it->second >= row.size()) return {};
        return trim(row[it->second]);
    }

private:
    const std::unordered_map<std::string, size_t>& header_;
    const SchemaMap& schema_;
};

void require_columns(const RowView& view, const std::vector<std::string>& fields,
                     const std::string& file_label) {
    for (const auto& f : fields) {
        if (!view.has(f))
            throw std::runtime_error("missing mandatory column for " + f + " in " + file_label);
    }
}

/// Leading five digits of a SIC entry ("62012 - Software development").
/// Non-code text ("None Supplied") maps to absent.
enum class SicParse { Absent, Valid, Invalid };
SicParse parse_sic(std::string_view text, std::string& code) {
    if (text.empty()) return SicParse::Absent;
    size_t digits = 0;
    while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) ++digits;
    if (digits == 0) return SicParse::Absent;
    if (digits != 5) return SicParse::Invalid;
    if (digits < text.size() && std::isalnum(static_cast<unsigned char>(text[digits])))
        return SicParse::Invalid;
    code.assign(text.substr(0, 5));
    return SicParse::Valid;
}

std::optional<Date> parse_date_field(std::string_view text, DateOrder order, bool& bad) {
    bad = false;
    if (text.empty()) return std::nullopt;
    auto d = Date::parse(text, order);
    if (!d) bad = true;
    return d;
}

}  // namespace

std::vector<CompanySnapshotRecord> parse_company_snapshot(std::istream& in, YearMonth month,
                                                          const SchemaMap& schema,
                                                          const std::string& file_label,
                                                          RejectionLog& rejections) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw std::runtime_error("empty snapshot file: " + file_label);
    for (auto& h : row) h = std::string(trim(h));
    auto header = header_index(row);
    RowView view(header, schema);
    require_columns(view, {"company.id", "company.name", "company.status"}, file_label);

    std::vector<CompanySnapshotRecord> records;
    while (reader.next(row)) {
        long rownum = reader.row();
        if (row.size() == 1 && row[0].empty()) continue;  // blank line

        CompanySnapshotRecord rec;
        rec.snapshot_month = month;
        rec.company_id = std::string(view.get(row, "company.id"));
        if (rec.company_id.empty()) {
            rejections.add(file_label, rownum, "empty company id");
            continue;
        }
        rec.name = to_upper(view.get(row, "company.name"));
        rec.status = std::string(view.get(row, "company.status"));

        bool bad = false;
        rec.incorporation_date =
            parse_date_field(view.get(row, "company.incorporation_date"), schema.date_order, bad);
        if (bad) {
            rejections.add(file_label, rownum, "invalid date");
            continue;
        }
        rec.dissolution_date =
            parse_date_field(view.get(row, "company.dissolution_date"), schema.date_order, bad);
        if (bad) {
            rejections.add(file_label, rownum, "invalid date");
            continue;
        }

        bool sic_bad = false;
        for (const char* field : {"company.sic1", "company.sic2", "company.sic3", "company.sic4"}) {
            std::string code;
            switch (parse_sic(view.get(row, field), code)) {
                case SicParse::Valid: rec.sic_codes.push_back(std::move(code)); break;
                case SicParse::Absent: break;
                case SicParse::Invalid: sic_bad = true; break;
            }
            if (sic_bad) break;
        }
        if (sic_bad) {
            rejections.add(file_label, rownum, "invalid sic code");
            continue;
        }

        auto pc = view.get(row, "company.postcode");
        if (!pc.empty()) rec.postcode = std::string(pc);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<OfficerEventRecord> parse_officer_file(std::istream& in, YearMonth month,
                                                   const SchemaMap& schema,
                                                   const std::string& file_label,
                                                   RejectionLog& rejections) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw std::runtime_error("empty officer file: " + file_label);
    for (auto& h : row) h = std::string(trim(h));
    auto header = header_index(row);
    RowView view(header, schema);
    require_columns(view, {"officer.name", "officer.company_id"}, file_label);

    std::vector<OfficerEventRecord> records;
    while (reader.next(row)) {
        long rownum = reader.row();
        if (row.size() == 1 && row[0].empty()) continue;

        OfficerEventRecord rec;
        rec.record_month = month;
        rec.company_id = std::string(view.get(row, "officer.company_id"));
        if (rec.company_id.empty()) {
            rejections.add(file_label, rownum, "empty company id");
            continue;
        }
        rec.officer_raw_name = std::string(view.get(row, "officer.name"));

        auto dob = view.get(row, "officer.birth_month");
        if (!dob.empty()) {
            auto ym = YearMonth::parse(dob);
            if (!ym) {
                rejections.add(file_label, rownum, "invalid birth month");
                continue;
            }
            rec.birth_month = *ym;
        }

        bool bad = false;
        rec.appointment_date =
            parse_date_field(view.get(row, "officer.appointment_date"), schema.date_order, bad);
        if (bad) {
            rejections.add(file_label, rownum, "invalid date");
            continue;
        }
        rec.resignation_date =
            parse_date_field(view.get(row, "officer.resignation_date"), schema.date_order, bad);
        if (bad) {
            rejections.add(file_label, rownum, "invalid date");
            continue;
        }
        if (rec.appointment_date && rec.resignation_date &&
            *rec.resignation_date < *rec.appointment_date) {
            rejections.add(file_label, rownum, "resignation before appointment");
            continue;
        }

        auto pc = view.get(row, "officer.postcode");
        if (!pc.empty()) rec.correspondence_postcode = std::string(pc);

        std::string type = to_upper(view.get(row, "officer.type"));
        rec.registry_marked_corporate = type.find("CORPORATE") != std::string::npos;

        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

std::map<YearMonth, std::filesystem::path> scan_monthly(const std::filesystem::path& dir,
                                                        const std::string& prefix) {
    std::map<YearMonth, std::filesystem::path> out;
    if (!std::filesystem::exists(dir)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (!starts_with(name, prefix) || !name.ends_with(".csv")) continue;
        auto ym = YearMonth::parse(name.substr(prefix.size(), name.size() - prefix.size() - 4));
        if (ym) out.emplace(*ym, entry.path());
    }
    return out;
}

}  // namespace

SnapshotArchive load_archive(const std::filesystem::path& snapshots_dir,
                             const std::filesystem::path& officers_dir, const SchemaMap& schema,
                             const std::optional<MonthRange>& window) {
    auto company_files = scan_monthly(snapshots_dir, "companies_");
    auto officer_files = scan_monthly(officers_dir, "officers_");
    if (company_files.empty())
        throw std::runtime_error("no companies_YYYY-MM.csv files in " + snapshots_dir.string());

    SnapshotArchive archive;
    for (const auto& [ym, path] : company_files) {
        if (window && !window->contains(ym)) continue;
        archive.months.push_back(ym);
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path.string());
        archive.companies.push_back(parse_company_snapshot(in, ym, schema, path.filename().string(),
                                                           archive.rejections));
        auto oit = officer_files.find(ym);
        if (oit != officer_files.end()) {
            std::ifstream oin(oit->second);
            if (!oin) throw std::runtime_error("cannot open " + oit->second.string());
            archive.officers.push_back(parse_officer_file(oin, ym, schema,
                                                          oit->second.filename().string(),
                                                          archive.rejections));
        } else {
            archive.officers.emplace_back();
        }
    }
    archive.validate_contiguous();
    return archive;
}

namespace {

std::string opt_date(const std::optional<Date>& d) { return d ? d->str() : std::string(); }
std::string opt_str(const std::optional<std::string>& s) { return s ? *s : std::string(); }

}  // namespace

void write_normalized_companies(const std::filesystem::path& path, const SnapshotArchive& archive) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv_row(out, {"company_id", "name", "status", "incorporation_date", "dissolution_date",
                        "sic1", "sic2", "sic3", "sic4", "postcode", "snapshot_month"});
    for (size_t mi = 0; mi < archive.months.size(); ++mi) {
        for (const auto& r : archive.companies[mi]) {
            std::vector<std::string> row(11);
            row[0] = r.company_id;
            row[1] = r.name;
            row[2] = r.status;
            row[3] = opt_date(r.incorporation_date);
            row[4] = opt_date(r.dissolution_date);
            for (size_t i = 0; i < 4; ++i) row[5 + i] = i < r.sic_codes.size() ? r.sic_codes[i] : "";
            row[9] = opt_str(r.postcode);
            row[10] = r.snapshot_month.str();
            write_csv_row(out, row);
        }
    }
}

void write_normalized_officers(const std::filesystem::path& path, const SnapshotArchive& archive) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv_row(out, {"officer_name", "company_id", "birth_month", "appointment_date",
                        "resignation_date", "postcode", "record_month", "registry_corporate"});
    for (size_t mi = 0; mi < archive.months.size(); ++mi) {
        for (const auto& r : archive.officers[mi]) {
            write_csv_row(out, {r.officer_raw_name, r.company_id,
                                r.birth_month ? r.birth_month->str() : "",
                                opt_date(r.appointment_date), opt_date(r.resignation_date),
                                opt_str(r.correspondence_postcode), r.record_month.str(),
                                r.registry_marked_corporate ? "1" : "0"});
        }
    }
}

std::vector<CompanySnapshotRecord> load_normalized_companies(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw std::runtime_error("empty normalized file: " + path.string());
    std::vector<CompanySnapshotRecord> out;
    while (reader.next(row)) {
        if (row.size() < 11) continue;
        CompanySnapshotRecord r;
        r.company_id = row[0];
        r.name = row[1];
        r.status = row[2];
        if (!row[3].empty()) r.incorporation_date = Date::parse(row[3]);
        if (!row[4].empty()) r.dissolution_date = Date::parse(row[4]);
        for (int i = 5; i <= 8; ++i)
            if (!row[i].empty()) r.sic_codes.push_back(row[i]);
        if (!row[9].empty()) r.postcode = row[9];
        if (auto ym = YearMonth::parse(row[10])) r.snapshot_month = *ym;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<OfficerEventRecord> load_normalized_officers(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw std::runtime_error("empty normalized file: " + path.string());
    std::vector<OfficerEventRecord> out;
    while (reader.next(row)) {
        if (row.size() < 8) continue;
        OfficerEventRecord r;
        r.officer_raw_name = row[0];
        r.company_id = row[1];
        if (!row[2].empty()) r.birth_month = YearMonth::parse(row[2]);
        if (!row[3].empty()) r.appointment_date = Date::parse(row[3]);
        if (!row[4].empty()) r.resignation_date = Date::parse(row[4]);
        if (!row[5].empty()) r.correspondence_postcode = row[5];
        if (auto ym = YearMonth::parse(row[6])) r.record_month = *ym;
        r.registry_marked_corporate = row[7] == "1";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace firmtrack::ingest
