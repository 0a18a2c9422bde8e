#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firmtrack/core/yearmonth.hpp"
#include "firmtrack/ingest/records.hpp"
#include "firmtrack/ts/series.hpp"

namespace firmtrack::status {

enum class StatusClass { Absent, Active, ClosedLike };

/// True for the verbatim closed-like registry statuses, matched
/// case-insensitively after whitespace normalization (the registry's
/// "Receiver Manger" spelling included).
bool is_closed_like(std::string_view raw_status);

/// Present statuses outside the closed list count as Active.
StatusClass classify_status(std::string_view raw_status);

enum class FirmEventType { Opened, Closed, Reopened, NoChange };

std::string_view event_name(FirmEventType e);

struct FirmEvent {
    std::string company_id;
    YearMonth month;
    FirmEventType event = FirmEventType::NoChange;
    bool inferred_dissolution = false;  // Closed because the firm dropped off the register
};

/// Per-firm status history, contiguous from first appearance to the last
/// observed month (Absent entries allowed after first appearance).
struct FirmTimeline {
    std::string company_id;
    YearMonth first_month;
    std::vector<StatusClass> statuses;

    StatusClass at(YearMonth m) const;
};

/// Month-over-month classifier. Feed consecutive months in order; the
/// machine applies the lifecycle rules: first presence with an Active
/// status is Opened (pre-existing firms at the window start emit nothing),
/// a first transition into a closed-like status is Closed, closed-to-active
/// is Reopened, active-to-active is NoChange, a persisting closed state is
/// silent, and a firm that disappears from the register while active is
/// Closed with the inferred_dissolution flag.
class FirmStateMachine {
public:
    explicit FirmStateMachine(std::string company_id) : company_id_(std::move(company_id)) {}

    std::optional<FirmEvent> step(YearMonth month, StatusClass status);

    bool open() const { return eff_ == Eff::Open; }

private:
    enum class Eff { NeverPresent, Open, Closed };
    std::string company_id_;
    Eff eff_ = Eff::NeverPresent;
    bool first_call_ = true;
};

/// One classification step in isolation: history strictly before t, the
/// status at t, and whether t is the first month of the study window.
std::optional<FirmEvent> classify_month(const FirmTimeline& history, YearMonth t,
                                        StatusClass current, YearMonth window_start);

/// Timelines from monthly snapshot records. Duplicate (company, month)
/// rows with conflicting statuses keep the first and are logged.
std::map<std::string, FirmTimeline> build_timelines(
    const std::vector<std::vector<ingest::CompanySnapshotRecord>>& by_month,
    const std::vector<YearMonth>& months, ingest::RejectionLog& rejections);

/// Events for every firm across the window months.
std::vector<FirmEvent> derive_events(const std::map<std::string, FirmTimeline>& timelines,
                                     const std::vector<YearMonth>& months);

/// Monthly event counts for one stratum.
struct EventSeries {
    std::string stratum;
    YearMonth start;
    std::vector<long> opened, closed, reopened, no_change;
    std::vector<long> net_active;

    int length() const { return static_cast<int>(opened.size()); }
    ts::MonthlySeries to_series(const std::string& measure) const;
};

/// Aggregates events into per-stratum monthly series. Companies without a
/// stratum fall into "UNKNOWN". `initial_active` seeds net_active at the
/// first month (count of firms open at the window start, per stratum).
std::vector<EventSeries> aggregate_events(const std::vector<FirmEvent>& events,
                                          const std::map<std::string, std::string>& stratifier,
                                          const std::vector<YearMonth>& months,
                                          const std::map<std::string, long>& initial_active = {});

/// Open-at-window-start counts per stratum, for seeding net_active.
std::map<std::string, long> initial_active_by_stratum(
    const std::map<std::string, FirmTimeline>& timelines,
    const std::map<std::string, std::string>& stratifier, YearMonth window_start);

/// SIC 2007 section letter ("A".."U") for a five-digit code, or "UNKNOWN".
std::string sic_section(std::string_view sic5);

}  // namespace firmtrack::status
