#pragma once

#include <string>
#include <string_view>

namespace firmtrack::ingest {

/// A personal name reduced to its matching form: uppercase, punctuation
/// stripped except hyphens, honorifics removed, split at the first comma
/// into surname and forenames ("SURNAME, Forenames" registry layout).
/// Without a comma the last token is taken as the surname.
struct NormalizedName {
    std::string surname;
    std::string forenames;  // space separated
    bool usable = false;

    std::string first_forename() const;
};

NormalizedName normalize_name(std::string_view raw);

}  // namespace firmtrack::ingest
