#include "firmtrack/ingest/normalize.hpp"

#include <array>
#include <cctype>

#include "firmtrack/core/strings.hpp"

namespace firmtrack::ingest {

namespace {

const std::array<std::string_view, 26> kHonorifics = {
    "MR",   "MRS",  "MS",        "MISS",    "MASTER", "DR",       "SIR",   "DAME",  "LORD",
    "LADY", "PROF", "PROFESSOR", "REV",     "REVD",   "REVEREND", "CAPT",  "CAPTAIN",
    "MAJ",  "MAJOR", "COL",      "COLONEL", "SGT",    "HON",      "CLLR",  "BARON", "BARONESS"};

bool is_honorific(std::string_view token) {
    for (auto h : kHonorifics)
        if (token == h) return true;
    return false;
}

/// Uppercase, keep letters/spaces/hyphens, collapse whitespace, drop
/// honorific tokens and stray hyphens.
std::string clean_part(std::string_view part) {
    std::string kept;
    kept.reserve(part.size());
    for (char c : part) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalpha(u)) kept.push_back(static_cast<char>(std::toupper(u)));
        else if (c == '-' || std::isspace(u)) kept.push_back(c);
        // everything else (apostrophes, periods, digits) dropped
    }
    std::string out;
    for (const auto& tok : split_tokens(kept)) {
        std::string_view t = tok;
        while (!t.empty() && t.front() == '-') t.remove_prefix(1);
        while (!t.empty() && t.back() == '-') t.remove_suffix(1);
        if (t.empty() || is_honorific(t)) continue;
        if (!out.empty()) out.push_back(' ');
        out.append(t);
    }
    return out;
}

}  // namespace

std::string NormalizedName::first_forename() const {
    auto sp = forenames.find(' ');
    return sp == std::string::npos ? forenames : forenames.substr(0, sp);
}

NormalizedName normalize_name(std::string_view raw) {
    NormalizedName out;
    auto comma = raw.find(',');
    if (comma != std::string_view::npos) {
        out.surname = clean_part(raw.substr(0, comma));
        out.forenames = clean_part(raw.substr(comma + 1));
    } else {
        std::string whole = clean_part(raw);
        auto last_space = whole.rfind(' ');
        if (last_space == std::string::npos) {
            out.surname = whole;
        } else {
            out.surname = whole.substr(last_space + 1);
            out.forenames = whole.substr(0, last_space);
        }
    }
    out.usable = !out.surname.empty();
    return out;
}

}  // namespace firmtrack::ingest
