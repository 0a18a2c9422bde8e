#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "firmtrack/core/yearmonth.hpp"
#include "firmtrack/resolve/identity.hpp"

namespace firmtrack::resolve {

/// Whole years of age at an observation month, with everyone assumed born
/// on the first of their birth month. Throws std::invalid_argument when
/// the observation precedes the birth month.
int compute_age(YearMonth birth_month, YearMonth observation);

/// Offline name-frequency table standing in for a gender inference
/// service. File format: lines of NAME,LABEL,CONFIDENCE with labels
/// woman/man/unknown.
struct GenderProviderTable {
    struct Entry {
        Gender label = Gender::Unresolved;
        double confidence = 0.0;
    };
    std::string locale;
    std::unordered_map<std::string, Entry> names;

    static GenderProviderTable load(const std::filesystem::path& path, std::string locale = "GB");
    std::optional<Entry> lookup(std::string_view forename) const;
};

/// Majority vote across providers; unknown votes abstain, ties and
/// all-unknown resolve to Unresolved.
Gender infer_gender(std::string_view forename, std::span<const GenderProviderTable> providers);

/// Longest-prefix postcode-area lookup. Unmatched or non-UK postcodes are
/// excluded (nullopt).
class RegionTable {
public:
    static const RegionTable& builtin();
    static RegionTable load(const std::filesystem::path& path);

    std::optional<std::string> map_region(std::string_view postcode) const;

private:
    std::unordered_map<std::string, std::string> prefix_to_region_;
};

}  // namespace firmtrack::resolve
