#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "firmtrack/core/yearmonth.hpp"
#include "firmtrack/ingest/records.hpp"

namespace firmtrack::resolve {

enum class Gender { Woman, Man, Unresolved };

std::string_view gender_name(Gender g);

struct PersonKey {
    std::string first_forename;
    std::string surname;
    std::optional<YearMonth> birth_month;

    friend auto operator<=>(const PersonKey&, const PersonKey&) = default;
};

struct Appointment {
    std::string company_id;
    std::optional<Date> appointment_date;
    std::optional<Date> resignation_date;
    YearMonth record_month;

    /// Month the appointment is evidenced: the appointment date when
    /// present, otherwise the month the record first appeared.
    YearMonth evidence_month() const {
        return appointment_date ? appointment_date->ym() : record_month;
    }
};

struct ResolvedPerson {
    long person_id = 0;
    PersonKey key;
    std::set<std::string> name_variants;  // first forenames seen
    std::string forenames;                // full forename string of the canonical variant
    std::vector<Appointment> appointments;
    Gender gender = Gender::Unresolved;
    std::string postcode;  // correspondence postcode from the earliest record
    std::string region;    // empty = excluded
    int match_distance = 0;  // 0 = exact merging only
    bool ambiguous = false;
    bool missing_birth_month = false;

    /// Distinct companies with an appointment evidenced strictly before
    /// as_of. Non-decreasing in as_of by construction.
    int prior_firm_count(YearMonth as_of) const;
};

enum class FirstTimeStatus { FirstTime, AlreadyOfficer };

/// FirstTime iff the person held no other firm appointment evidenced
/// before the event month.
FirstTimeStatus classify_first_time(const ResolvedPerson& person, YearMonth event_month);

/// Entity resolution over person officer records (corporate rows are the
/// caller's concern). Records sharing (first forename, surname, birth
/// month) merge exactly; within a (surname, birth month) block, forename
/// variants within the edit-distance threshold merge transitively,
/// processed level by level so the outcome is independent of input order.
/// Equal-distance links to different clusters flag the merged person as
/// ambiguous. Records without a birth month become flagged singletons.
std::vector<ResolvedPerson> resolve_identities(
    const std::vector<ingest::OfficerEventRecord>& records, int fuzzy_threshold);

}  // namespace firmtrack::resolve
