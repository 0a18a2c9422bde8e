#include "firmtrack/pipeline/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "firmtrack/core/csv.hpp"
#include "firmtrack/ingest/parse.hpp"
#include "firmtrack/pipeline/pipeline.hpp"
#include "firmtrack/resolve/demographics.hpp"
#include "firmtrack/resolve/identity.hpp"
#include "firmtrack/status/status.hpp"

namespace firmtrack::pipeline {

namespace fs = std::filesystem;

namespace {

struct SectorAccumulator {
    // Pre-window officer demographics.
    long women = 0, men = 0;
    std::vector<int> ages;
    // Monthly activity in each window.
    long pre_open = 0, covid_open = 0;
    long pre_close = 0, covid_close = 0;
    double pre_active_months = 0, covid_active_months = 0;    // firm-month counts
    double pre_london_months = 0, covid_london_months = 0;
};

std::string fmt(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

void emit_report(const PipelineConfig& cfg, const fs::path& normalized_companies,
                 const fs::path& normalized_officers, const fs::path& sector_table_path,
                 const fs::path& plot_data_dir) {
    auto companies = ingest::load_normalized_companies(normalized_companies);
    auto officer_records = ingest::load_normalized_officers(normalized_officers);
    auto partition = ingest::filter_corporate_officers(std::move(officer_records));
    auto persons = resolve::resolve_identities(partition.persons, cfg.fuzzy_threshold);

    std::vector<resolve::GenderProviderTable> providers;
    if (!cfg.gender_tables_dir.empty() && fs::is_directory(cfg.gender_tables_dir)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(cfg.gender_tables_dir))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
            providers.push_back(resolve::GenderProviderTable::load(f, f.stem().string()));
    }
    resolve::RegionTable regions = cfg.postcode_map.empty()
                                       ? resolve::RegionTable::builtin()
                                       : resolve::RegionTable::load(cfg.postcode_map);

    // Company attributes: section, London flag, lifecycle.
    std::map<std::string, std::string> section_of;
    std::map<std::string, bool> london_of;
    std::map<std::string, std::map<YearMonth, status::StatusClass>> month_status;
    for (const auto& r : companies) {
        if (!r.sic_codes.empty() && !section_of.count(r.company_id))
            section_of[r.company_id] = status::sic_section(r.sic_codes[0]);
        if (r.postcode && !london_of.count(r.company_id)) {
            auto reg = regions.map_region(*r.postcode);
            london_of[r.company_id] = reg && *reg == "Greater London";
        }
        month_status[r.company_id][r.snapshot_month] = status::classify_status(r.status);
    }

    auto section_or_unknown = [&](const std::string& company) {
        auto it = section_of.find(company);
        return it == section_of.end() ? std::string("UNKNOWN") : it->second;
    };

    std::map<std::string, SectorAccumulator> sectors;

    // Officer demographics in the pre-Covid window: officers whose
    // appointment is evidenced inside the window, attributed to the
    // company's section.
    for (auto& p : persons) {
        p.gender = resolve::infer_gender(p.key.first_forename, providers);
        for (const auto& app : p.appointments) {
            YearMonth ev = app.evidence_month();
            if (!cfg.pre_covid.contains(ev)) continue;
            SectorAccumulator& acc = sectors[section_or_unknown(app.company_id)];
            if (p.gender == resolve::Gender::Woman) ++acc.women;
            else if (p.gender == resolve::Gender::Man) ++acc.men;
            if (p.key.birth_month && *p.key.birth_month <= ev)
                acc.ages.push_back(resolve::compute_age(*p.key.birth_month, ev));
        }
    }

    // Firm lifecycle counts per window, replaying the event state machine
    // over the snapshot span.
    YearMonth global_first{9999, 12}, global_last{0, 1};
    for (const auto& r : companies) {
        if (r.snapshot_month < global_first) global_first = r.snapshot_month;
        if (global_last < r.snapshot_month) global_last = r.snapshot_month;
    }
    for (const auto& [company, history] : month_status) {
        SectorAccumulator& acc = sectors[section_or_unknown(company)];
        bool london = false;
        if (auto it = london_of.find(company); it != london_of.end()) london = it->second;

        status::FirmStateMachine machine(company);
        for (YearMonth ym = global_first; ym <= global_last; ym = ym.plus_months(1)) {
            auto hit = history.find(ym);
            status::StatusClass sc =
                hit == history.end() ? status::StatusClass::Absent : hit->second;
            auto ev = machine.step(ym, sc);
            bool opened = ev && ev->event == status::FirmEventType::Opened;
            bool closed = ev && ev->event == status::FirmEventType::Closed;
            bool active = machine.open();
            if (cfg.pre_covid.contains(ym)) {
                acc.pre_open += opened ? 1 : 0;
                acc.pre_close += closed ? 1 : 0;
                if (active) {
                    acc.pre_active_months += 1;
                    if (london) acc.pre_london_months += 1;
                }
            } else if (cfg.during_covid.contains(ym)) {
                acc.covid_open += opened ? 1 : 0;
                acc.covid_close += closed ? 1 : 0;
                if (active) {
                    acc.covid_active_months += 1;
                    if (london) acc.covid_london_months += 1;
                }
            }
        }
    }

    const double pre_months = cfg.pre_covid.length();
    const double covid_months = cfg.during_covid.length();

    std::ofstream out(sector_table_path);
    write_csv_row(out, {"sector", "pct_women", "mean_age", "pct_under_35", "pct_over_60",
                        "firms_ratio", "open_ratio", "close_ratio", "london_ratio", "note"});
    for (const auto& [section, acc] : sectors) {
        std::vector<std::string> row(10);
        row[0] = section;
        long gendered = acc.women + acc.men;
        row[1] = gendered ? fmt(static_cast<double>(acc.women) / gendered) : "";
        if (!acc.ages.empty()) {
            double sum = 0, under35 = 0, over60 = 0;
            for (int a : acc.ages) {
                sum += a;
                if (a < 35) ++under35;
                if (a > 60) ++over60;
            }
            row[2] = fmt(sum / acc.ages.size());
            row[3] = fmt(under35 / acc.ages.size());
            row[4] = fmt(over60 / acc.ages.size());
        }
        std::string note;
        auto ratio = [&](double covid_total, double pre_total) -> std::string {
            double pre_rate = pre_total / pre_months;
            double covid_rate = covid_total / covid_months;
            if (pre_rate <= 0.0) {
                note = "no pre-window activity";
                return "";
            }
            return fmt(covid_rate / pre_rate);
        };
        row[5] = ratio(acc.covid_active_months, acc.pre_active_months);
        row[6] = ratio(static_cast<double>(acc.covid_open), static_cast<double>(acc.pre_open));
        row[7] = ratio(static_cast<double>(acc.covid_close), static_cast<double>(acc.pre_close));
        double pre_share = acc.pre_active_months > 0 ? acc.pre_london_months / acc.pre_active_months : 0.0;
        double covid_share =
            acc.covid_active_months > 0 ? acc.covid_london_months / acc.covid_active_months : 0.0;
        row[8] = pre_share > 0 ? fmt(covid_share / pre_share) : "";
        row[9] = note;
        write_csv_row(out, row);
    }

    // Plot data: copy the excess report rows into per-measure plot files.
    for (const char* m : {"net_active", "opened", "closed"}) {
        fs::path src = cfg.out_dir / (std::string("excess_") + m + ".csv");
        if (!fs::exists(src)) continue;
        std::ifstream in(src);
        std::ofstream plot(plot_data_dir / (std::string("plot_excess_") + m + ".csv"));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] == '#') continue;
            plot << line << '\n';
        }
    }
}

}  // namespace firmtrack::pipeline
