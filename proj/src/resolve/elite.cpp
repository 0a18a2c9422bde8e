#include "firmtrack/resolve/elite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/stats.hpp"

namespace firmtrack::resolve {

std::vector<EliteTableRow> elite_rows_from_counts(
    const std::vector<std::pair<long, long>>& totals_and_created) {
    std::vector<EliteTableRow> rows;
    for (size_t i = 0; i < totals_and_created.size(); ++i) {
        EliteTableRow row;
        row.bucket = i + 1 >= 10 ? "10+" : std::to_string(i + 1);
        row.pre_pandemic_total = totals_and_created[i].first;
        row.created_during = totals_and_created[i].second;
        row.creation_ratio = row.pre_pandemic_total > 0
                                 ? static_cast<double>(row.created_during) / row.pre_pandemic_total
                                 : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

/// Companies whose earliest appointment evidence falls inside the window.
std::map<std::string, YearMonth> first_evidence(const std::vector<ResolvedPerson>& persons) {
    std::map<std::string, YearMonth> first;
    for (const auto& p : persons) {
        for (const auto& app : p.appointments) {
            auto [it, inserted] = first.try_emplace(app.company_id, app.evidence_month());
            if (!inserted && app.evidence_month() < it->second) it->second = app.evidence_month();
        }
    }
    return first;
}

}  // namespace

std::vector<EliteTableRow> elite_table(const std::vector<ResolvedPerson>& persons,
                                       YearMonth cutoff, MonthRange window) {
    if (!(cutoff < window.first)) throw std::invalid_argument("elite_table: cutoff must precede window");
    auto first = first_evidence(persons);

    std::vector<std::pair<long, long>> counts(10, {0, 0});
    for (const auto& p : persons) {
        int prior = p.prior_firm_count(cutoff);
        if (prior < 1) continue;
        int bucket = std::min(prior, 10) - 1;
        ++counts[bucket].first;
        for (const auto& app : p.appointments) {
            YearMonth ev = app.evidence_month();
            if (!window.contains(ev)) continue;
            auto fit = first.find(app.company_id);
            if (fit == first.end() || !window.contains(fit->second)) continue;
            ++counts[bucket].second;  // one new-firm officership
        }
    }
    return elite_rows_from_counts(counts);
}

std::string elite_table_to_csv(const std::vector<EliteTableRow>& rows) {
    std::ostringstream os;
    os << "pre_existing_firms,pre_pandemic_total,created_during,creation_ratio_pct\n";
    for (const auto& r : rows) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * r.creation_ratio);
        os << r.bucket << ',' << r.pre_pandemic_total << ',' << r.created_during << ',' << buf
           << '\n';
    }
    return os.str();
}

double winsorised_mean(std::vector<double> values, double quantile) {
    if (values.empty()) throw std::invalid_argument("winsorised_mean: empty sample");
    double cap = stats::nearest_rank_quantile(values, quantile);
    double sum = 0.0;
    for (double v : values) sum += std::min(v, cap);
    return sum / static_cast<double>(values.size());
}

std::vector<SectionExperience> industry_experience(
    const std::vector<ResolvedPerson>& persons,
    const std::map<std::string, std::string>& company_section, MonthRange pre_window,
    MonthRange during_window, double winsor_quantile) {
    auto first = first_evidence(persons);

    // (section, period) -> officers' prior firm counts at founding month.
    std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
    for (const auto& p : persons) {
        for (const auto& app : p.appointments) {
            auto fit = first.find(app.company_id);
            if (fit == first.end()) continue;
            YearMonth born = fit->second;
            std::string period;
            if (pre_window.contains(born)) period = "pre";
            else if (during_window.contains(born)) period = "during";
            else continue;
            if (app.evidence_month() != born) continue;  // founding officers only
            auto sit = company_section.find(app.company_id);
            std::string section = sit == company_section.end() ? "UNKNOWN" : sit->second;
            cells[{section, period}].push_back(static_cast<double>(p.prior_firm_count(born)));
        }
    }

    std::vector<SectionExperience> out;
    for (auto& [key, values] : cells) {
        SectionExperience e;
        e.section = key.first;
        e.period = key.second;
        e.n = static_cast<long>(values.size());
        double cap = stats::nearest_rank_quantile(values, winsor_quantile);
        std::vector<double> w = values;
        for (double& v : w) v = std::min(v, cap);
        e.mean = stats::mean(w);
        double sd = std::sqrt(stats::sample_variance(w));
        double half = e.n > 0 ? 1.959963984540054 * sd / std::sqrt(static_cast<double>(e.n)) : 0.0;
        e.lower = e.mean - half;
        e.upper = e.mean + half;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace firmtrack::resolve
