#include "firmtrack/ingest/records.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/csv.hpp"
#include "firmtrack/core/kv_config.hpp"
#include "firmtrack/core/strings.hpp"

namespace firmtrack::ingest {

std::string RejectionLog::to_text() const {
    std::ostringstream os;
    for (const auto& e : entries) os << e.file << ',' << e.row << ',' << e.reason << '\n';
    return os.str();
}

SchemaMap SchemaMap::defaults() {
    SchemaMap m;
    m.columns = {
        {"company.id", "CompanyNumber"},
        {"company.name", "CompanyName"},
        {"company.status", "CompanyStatus"},
        {"company.incorporation_date", "IncorporationDate"},
        {"company.dissolution_date", "DissolutionDate"},
        {"company.sic1", "SicText_1"},
        {"company.sic2", "SicText_2"},
        {"company.sic3", "SicText_3"},
        {"company.sic4", "SicText_4"},
        {"company.postcode", "RegAddress.PostCode"},
        {"officer.name", "OfficerName"},
        {"officer.company_id", "CompanyNumber"},
        {"officer.birth_month", "DateOfBirth"},
        {"officer.appointment_date", "AppointmentDate"},
        {"officer.resignation_date", "ResignationDate"},
        {"officer.postcode", "CorrespondencePostCode"},
        {"officer.type", "OfficerType"},
    };
    return m;
}

SchemaMap SchemaMap::load(const std::filesystem::path& path) {
    SchemaMap m = defaults();
    KvConfig kv = KvConfig::parse_file(path);
    for (const auto& [k, v] : kv.values()) {
        if (k == "date_order") {
            if (v == "iso") m.date_order = DateOrder::Iso;
            else if (v == "dmy") m.date_order = DateOrder::DayMonthYear;
            else throw std::runtime_error("schema map: date_order must be iso or dmy");
        } else if (m.columns.count(k)) {
            m.columns[k] = v;
        } else {
            throw std::runtime_error("schema map: unknown field " + k);
        }
    }
    return m;
}

const std::string& SchemaMap::column(const std::string& field) const {
    auto it = columns.find(field);
    if (it == columns.end()) throw std::logic_error("schema map: no such field " + field);
    return it->second;
}

const std::vector<std::string>& corporate_name_tokens() {
    static const std::vector<std::string> kTokens = {
        "COMMERCIAL",      "COMPANY",      "CORPORATE", "DETAILS",
        "EXCHANGE",        "HOLDINGS",     "INTERNATIONAL", "INVESTMENTS",
        "LIMITED",         "LTD",          "NON-DESTRUCTIVE", "PARTNERSHIPS",
        "PRIVATE",         "PROSECUTION",  "SECRETARIAT", "SERVICES"};
    return kTokens;
}

bool is_corporate_name(std::string_view raw_name) {
    // Whole-token match: uppercase, keep hyphens, split on everything else.
    auto matches = [](const std::string& token) {
        if (token.empty()) return false;
        for (const auto& t : corporate_name_tokens())
            if (token == t) return true;
        return false;
    };
    std::string token;
    for (char c : raw_name) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '-') {
            token.push_back(static_cast<char>(std::toupper(u)));
        } else {
            if (matches(token)) return true;
            token.clear();
        }
    }
    return matches(token);
}

CorporatePartition filter_corporate_officers(std::vector<OfficerEventRecord> records) {
    CorporatePartition out;
    size_t total = records.size();
    for (auto& r : records) {
        bool corporate = r.registry_marked_corporate || is_corporate_name(r.officer_raw_name);
        (corporate ? out.companies : out.persons).push_back(std::move(r));
    }
    out.corporate_share =
        total == 0 ? 0.0 : static_cast<double>(out.companies.size()) / static_cast<double>(total);
    return out;
}

void SnapshotArchive::validate_contiguous() const {
    for (size_t i = 1; i < months.size(); ++i) {
        if (months[i].index() != months[i - 1].index() + 1)
            throw std::runtime_error("snapshot archive has a gap after " + months[i - 1].str());
    }
}

}  // namespace firmtrack::ingest
