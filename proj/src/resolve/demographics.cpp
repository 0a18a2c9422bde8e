#include "firmtrack/resolve/demographics.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

#include "firmtrack/core/csv.hpp"
#include "firmtrack/core/strings.hpp"

namespace firmtrack::resolve {

int compute_age(YearMonth birth_month, YearMonth observation) {
    int months = months_between(birth_month, observation);
    if (months < 0) throw std::invalid_argument("compute_age: birth month after observation");
    return months / 12;
}

GenderProviderTable GenderProviderTable::load(const std::filesystem::path& path,
                                              std::string locale) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gender table: " + path.string());
    GenderProviderTable table;
    table.locale = std::move(locale);
    CsvReader reader(in);
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() < 2 || row[0].empty()) continue;
        std::string name = to_upper(trim(row[0]));
        std::string label = to_upper(trim(row[1]));
        Entry e;
        if (label == "WOMAN" || label == "F" || label == "FEMALE") e.label = Gender::Woman;
        else if (label == "MAN" || label == "M" || label == "MALE") e.label = Gender::Man;
        else e.label = Gender::Unresolved;
        if (row.size() >= 3 && !row[2].empty()) {
            try {
                e.confidence = std::stod(row[2]);
            } catch (const std::exception&) {
                e.confidence = 0.0;
            }
        }
        if (e.confidence < 0.0 || e.confidence > 1.0)
            throw std::runtime_error("gender table confidence outside [0,1]: " + row[0]);
        table.names.emplace(std::move(name), e);
    }
    return table;
}

std::optional<GenderProviderTable::Entry> GenderProviderTable::lookup(
    std::string_view forename) const {
    auto it = names.find(to_upper(forename));
    if (it == names.end()) return std::nullopt;
    return it->second;
}

Gender infer_gender(std::string_view forename, std::span<const GenderProviderTable> providers) {
    int woman = 0, man = 0;
    for (const auto& table : providers) {
        auto entry = table.lookup(forename);
        if (!entry) continue;
        if (entry->label == Gender::Woman) ++woman;
        else if (entry->label == Gender::Man) ++man;
    }
    if (woman > man) return Gender::Woman;
    if (man > woman) return Gender::Man;
    return Gender::Unresolved;
}

namespace {

// Postcode area to region/nation, dominant assignment for split areas.
struct AreaRegion {
    const char* area;
    const char* region;
};

constexpr AreaRegion kAreas[] = {
    // Scotland
    {"AB", "Scotland"}, {"DD", "Scotland"}, {"DG", "Scotland"}, {"EH", "Scotland"},
    {"FK", "Scotland"}, {"G", "Scotland"}, {"HS", "Scotland"}, {"IV", "Scotland"},
    {"KA", "Scotland"}, {"KW", "Scotland"}, {"KY", "Scotland"}, {"ML", "Scotland"},
    {"PA", "Scotland"}, {"PH", "Scotland"}, {"TD", "Scotland"}, {"ZE", "Scotland"},
    // Northern Ireland
    {"BT", "Northern Ireland"},
    // Wales
    {"CF", "Wales"}, {"LD", "Wales"}, {"LL", "Wales"}, {"NP", "Wales"}, {"SA", "Wales"},
    {"SY", "Wales"},
    // North East
    {"DH", "North East"}, {"DL", "North East"}, {"NE", "North East"}, {"SR", "North East"},
    {"TS", "North East"},
    // North West
    {"BB", "North West"}, {"BL", "North West"}, {"CA", "North West"}, {"CH", "North West"},
    {"CW", "North West"}, {"FY", "North West"}, {"L", "North West"}, {"LA", "North West"},
    {"M", "North West"}, {"OL", "North West"}, {"PR", "North West"}, {"SK", "North West"},
    {"WA", "North West"}, {"WN", "North West"},
    // Yorkshire and The Humber
    {"BD", "Yorkshire and The Humber"}, {"DN", "Yorkshire and The Humber"},
    {"HD", "Yorkshire and The Humber"}, {"HG", "Yorkshire and The Humber"},
    {"HU", "Yorkshire and The Humber"}, {"HX", "Yorkshire and The Humber"},
    {"LS", "Yorkshire and The Humber"}, {"S", "Yorkshire and The Humber"},
    {"WF", "Yorkshire and The Humber"}, {"YO", "Yorkshire and The Humber"},
    // East Midlands
    {"DE", "East Midlands"}, {"LE", "East Midlands"}, {"LN", "East Midlands"},
    {"NG", "East Midlands"}, {"NN", "East Midlands"},
    // West Midlands
    {"B", "West Midlands"}, {"CV", "West Midlands"}, {"DY", "West Midlands"},
    {"HR", "West Midlands"}, {"ST", "West Midlands"}, {"TF", "West Midlands"},
    {"WR", "West Midlands"}, {"WS", "West Midlands"}, {"WV", "West Midlands"},
    // East of England
    {"AL", "East of England"}, {"CB", "East of England"}, {"CM", "East of England"},
    {"CO", "East of England"}, {"IP", "East of England"}, {"LU", "East of England"},
    {"NR", "East of England"}, {"PE", "East of England"}, {"SG", "East of England"},
    {"SS", "East of England"}, {"WD", "East of England"},
    // Greater London
    {"BR", "Greater London"}, {"CR", "Greater London"}, {"E", "Greater London"},
    {"EC", "Greater London"}, {"EN", "Greater London"}, {"HA", "Greater London"},
    {"IG", "Greater London"}, {"KT", "Greater London"}, {"N", "Greater London"},
    {"NW", "Greater London"}, {"RM", "Greater London"}, {"SE", "Greater London"},
    {"SM", "Greater London"}, {"SW", "Greater London"}, {"TW", "Greater London"},
    {"UB", "Greater London"}, {"W", "Greater London"}, {"WC", "Greater London"},
    // South East
    {"BN", "South East"}, {"CT", "South East"}, {"DA", "South East"}, {"GU", "South East"},
    {"HP", "South East"}, {"ME", "South East"}, {"MK", "South East"}, {"OX", "South East"},
    {"PO", "South East"}, {"RG", "South East"}, {"RH", "South East"}, {"SL", "South East"},
    {"SO", "South East"}, {"TN", "South East"},
    // South West
    {"BA", "South West"}, {"BH", "South West"}, {"BS", "South West"}, {"DT", "South West"},
    {"EX", "South West"}, {"GL", "South West"}, {"PL", "South West"}, {"SN", "South West"},
    {"SP", "South West"}, {"TA", "South West"}, {"TQ", "South West"}, {"TR", "South West"},
};

}  // namespace

const RegionTable& RegionTable::builtin() {
    static const RegionTable table = [] {
        RegionTable t;
        for (const auto& ar : kAreas) t.prefix_to_region_.emplace(ar.area, ar.region);
        return t;
    }();
    return table;
}

RegionTable RegionTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open postcode map: " + path.string());
    RegionTable t;
    CsvReader reader(in);
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() < 2 || row[0].empty() || row[0] == "prefix") continue;
        t.prefix_to_region_.emplace(to_upper(trim(row[0])), std::string(trim(row[1])));
    }
    if (t.prefix_to_region_.empty())
        throw std::runtime_error("postcode map has no entries: " + path.string());
    return t;
}

std::optional<std::string> RegionTable::map_region(std::string_view postcode) const {
    // Leading letters form the area; try the longest prefix first.
    std::string area;
    for (char c : postcode) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isspace(u) && area.empty()) continue;
        if (!std::isalpha(u)) break;
        area.push_back(static_cast<char>(std::toupper(u)));
        if (area.size() == 4) break;  // no area is this long
    }
    while (!area.empty()) {
        auto it = prefix_to_region_.find(area);
        if (it != prefix_to_region_.end()) return it->second;
        area.pop_back();
    }
    return std::nullopt;
}

}  // namespace firmtrack::resolve
