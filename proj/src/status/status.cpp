#include "firmtrack/status/status.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "firmtrack/core/strings.hpp"

namespace firmtrack::status {

namespace {

const std::array<std::string_view, 8> kClosedStatuses = {
    "active - proposal to strike off",
    "administration order",
    "administrative receiver",
    "in administration",
    "in administration/administrative receiver",
    "in administration/receiver manger",
    "receiver manager/administrative receiver",
    "voluntary arrangement/receiver manager",
};

std::string fold(std::string_view s) {
    std::string out = collapse_whitespace(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

bool is_closed_like(std::string_view raw_status) {
    std::string folded = fold(raw_status);
    return std::find(kClosedStatuses.begin(), kClosedStatuses.end(), folded) !=
           kClosedStatuses.end();
}

StatusClass classify_status(std::string_view raw_status) {
    return is_closed_like(raw_status) ? StatusClass::ClosedLike : StatusClass::Active;
}

std::string_view event_name(FirmEventType e) {
    switch (e) {
        case FirmEventType::Opened: return "Opened";
        case FirmEventType::Closed: return "Closed";
        case FirmEventType::Reopened: return "Reopened";
        case FirmEventType::NoChange: return "NoChange";
    }
    return "?";
}

StatusClass FirmTimeline::at(YearMonth m) const {
    int idx = months_between(first_month, m);
    if (idx < 0 || idx >= static_cast<int>(statuses.size())) return StatusClass::Absent;
    return statuses[idx];
}

std::optional<FirmEvent> FirmStateMachine::step(YearMonth month, StatusClass status) {
    bool window_start = first_call_;
    first_call_ = false;

    if (eff_ == Eff::NeverPresent) {
        if (status == StatusClass::Absent) return std::nullopt;
        Eff entered = status == StatusClass::Active ? Eff::Open : Eff::Closed;
        eff_ = entered;
        // Firms already on the register in the very first window month are
        // pre-existing, not Opened. A firm whose first appearance carries a
        // closed-like status enters silently as closed.
        if (window_start || entered == Eff::Closed) return std::nullopt;
        return FirmEvent{company_id_, month, FirmEventType::Opened, false};
    }

    if (eff_ == Eff::Open) {
        if (status == StatusClass::Active)
            return FirmEvent{company_id_, month, FirmEventType::NoChange, false};
        eff_ = Eff::Closed;
        bool inferred = status == StatusClass::Absent;
        return FirmEvent{company_id_, month, FirmEventType::Closed, inferred};
    }

    // eff_ == Closed
    if (status == StatusClass::Active) {
        eff_ = Eff::Open;
        return FirmEvent{company_id_, month, FirmEventType::Reopened, false};
    }
    return std::nullopt;  // persisting closed or dropped off while closed
}

std::optional<FirmEvent> classify_month(const FirmTimeline& history, YearMonth t,
                                        StatusClass current, YearMonth window_start) {
    FirmStateMachine machine(history.company_id);
    for (YearMonth m = window_start; m < t; m = m.plus_months(1)) machine.step(m, history.at(m));
    return machine.step(t, current);
}

std::map<std::string, FirmTimeline> build_timelines(
    const std::vector<std::vector<ingest::CompanySnapshotRecord>>& by_month,
    const std::vector<YearMonth>& months, ingest::RejectionLog& rejections) {
    if (by_month.size() != months.size())
        throw std::invalid_argument("build_timelines: month list mismatch");
    std::map<std::string, FirmTimeline> timelines;
    for (size_t mi = 0; mi < months.size(); ++mi) {
        for (const auto& rec : by_month[mi]) {
            StatusClass sc = classify_status(rec.status);
            auto [it, inserted] = timelines.try_emplace(rec.company_id);
            FirmTimeline& tl = it->second;
            if (inserted) {
                tl.company_id = rec.company_id;
                tl.first_month = months[mi];
            }
            int idx = months_between(tl.first_month, months[mi]);
            if (idx < static_cast<int>(tl.statuses.size())) {
                if (tl.statuses[idx] != sc)
                    rejections.add("snapshot " + months[mi].str(), 0,
                                   "conflicting duplicate status for " + rec.company_id);
                continue;  // keep first
            }
            while (static_cast<int>(tl.statuses.size()) < idx)
                tl.statuses.push_back(StatusClass::Absent);
            tl.statuses.push_back(sc);
        }
    }
    return timelines;
}

std::vector<FirmEvent> derive_events(const std::map<std::string, FirmTimeline>& timelines,
                                     const std::vector<YearMonth>& months) {
    std::vector<FirmEvent> events;
    for (const auto& [id, tl] : timelines) {
        FirmStateMachine machine(id);
        for (YearMonth m : months) {
            if (auto ev = machine.step(m, tl.at(m))) events.push_back(std::move(*ev));
        }
    }
    return events;
}

ts::MonthlySeries EventSeries::to_series(const std::string& measure) const {
    const std::vector<long>* src = nullptr;
    if (measure == "opened") src = &opened;
    else if (measure == "closed") src = &closed;
    else if (measure == "reopened") src = &reopened;
    else if (measure == "no_change") src = &no_change;
    else if (measure == "net_active") src = &net_active;
    else throw std::invalid_argument("unknown measure: " + measure);
    ts::MonthlySeries out;
    out.start = start;
    out.frequency = 12;
    out.values.assign(src->begin(), src->end());
    return out;
}

std::vector<EventSeries> aggregate_events(const std::vector<FirmEvent>& events,
                                          const std::map<std::string, std::string>& stratifier,
                                          const std::vector<YearMonth>& months,
                                          const std::map<std::string, long>& initial_active) {
    if (months.empty()) return {};
    std::map<std::string, EventSeries> by_stratum;
    auto series_for = [&](const std::string& stratum) -> EventSeries& {
        auto [it, inserted] = by_stratum.try_emplace(stratum);
        if (inserted) {
            EventSeries& s = it->second;
            s.stratum = stratum;
            s.start = months.front();
            size_t n = months.size();
            s.opened.assign(n, 0);
            s.closed.assign(n, 0);
            s.reopened.assign(n, 0);
            s.no_change.assign(n, 0);
            s.net_active.assign(n, 0);
        }
        return it->second;
    };
    for (const auto& [stratum, count] : initial_active) series_for(stratum);

    for (const auto& ev : events) {
        auto sit = stratifier.find(ev.company_id);
        const std::string& stratum = sit == stratifier.end() ? "UNKNOWN" : sit->second;
        EventSeries& s = series_for(stratum);
        int idx = months_between(s.start, ev.month);
        if (idx < 0 || idx >= s.length()) continue;
        switch (ev.event) {
            case FirmEventType::Opened: ++s.opened[idx]; break;
            case FirmEventType::Closed: ++s.closed[idx]; break;
            case FirmEventType::Reopened: ++s.reopened[idx]; break;
            case FirmEventType::NoChange: ++s.no_change[idx]; break;
        }
    }

    std::vector<EventSeries> out;
    for (auto& [stratum, s] : by_stratum) {
        long running = 0;
        auto init = initial_active.find(stratum);
        if (init != initial_active.end()) running = init->second;
        for (int i = 0; i < s.length(); ++i) {
            running += s.opened[i] + s.reopened[i] - s.closed[i];
            s.net_active[i] = running;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::map<std::string, long> initial_active_by_stratum(
    const std::map<std::string, FirmTimeline>& timelines,
    const std::map<std::string, std::string>& stratifier, YearMonth window_start) {
    std::map<std::string, long> out;
    for (const auto& [id, tl] : timelines) {
        if (tl.at(window_start) != StatusClass::Active) continue;
        auto sit = stratifier.find(id);
        ++out[sit == stratifier.end() ? "UNKNOWN" : sit->second];
    }
    return out;
}

std::string sic_section(std::string_view sic5) {
    if (sic5.size() < 2) return "UNKNOWN";
    int div = 0;
    for (char c : sic5.substr(0, 2)) {
        if (c < '0' || c > '9') return "UNKNOWN";
        div = div * 10 + (c - '0');
    }
    if (div >= 1 && div <= 3) return "A";
    if (div >= 5 && div <= 9) return "B";
    if (div >= 10 && div <= 33) return "C";
    if (div == 35) return "D";
    if (div >= 36 && div <= 39) return "E";
    if (div >= 41 && div <= 43) return "F";
    if (div >= 45 && div <= 47) return "G";
    if (div >= 49 && div <= 53) return "H";
    if (div >= 55 && div <= 56) return "I";
    if (div >= 58 && div <= 63) return "J";
    if (div >= 64 && div <= 66) return "K";
    if (div == 68) return "L";
    if (div >= 69 && div <= 75) return "M";
    if (div >= 77 && div <= 82) return "N";
    if (div == 84) return "O";
    if (div == 85) return "P";
    if (div >= 86 && div <= 88) return "Q";
    if (div >= 90 && div <= 93) return "R";
    if (div >= 94 && div <= 96) return "S";
    if (div >= 97 && div <= 98) return "T";
    if (div == 99) return "U";
    return "UNKNOWN";
}

}  // namespace firmtrack::status
