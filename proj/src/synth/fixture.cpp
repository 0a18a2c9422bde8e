#include "firmtrack/synth/fixture.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "firmtrack/core/csv.hpp"

namespace firmtrack::synth {

namespace {

namespace fs = std::filesystem;

const char* kWomanNames[] = {"MARY",   "JANE",  "SARAH",  "EMMA",  "OLIVIA", "SOPHIE",
                             "CHLOE",  "GRACE", "LUCY",   "HANNAH", "ELLA",  "AMELIA",
                             "FIONA",  "ALICE", "CLAIRE", "LAURA",  "KAREN", "SUSAN"};
const char* kManNames[] = {"JOHN",  "JAMES",  "WILLIAM", "GEORGE", "THOMAS", "HARRY",
                           "JACK",  "OLIVER", "CHARLIE", "OSCAR",  "HENRY",  "LEO",
                           "DAVID", "PETER",  "ANDREW",  "MARK",   "PAUL",   "RICHARD"};
const char* kSurnames[] = {"SMITH",  "JONES",    "TAYLOR", "BROWN", "WILSON",  "EVANS",
                           "THOMAS", "JOHNSON",  "WALKER", "WHITE", "ROBERTS", "GREEN",
                           "HALL",   "WOOD",     "CLARKE", "HUGHES", "KHAN",   "PATEL",
                           "MURPHY", "CAMPBELL", "STEWART", "MORRIS", "COOPER", "BAKER"};
const char* kCorporateNames[] = {"ACME HOLDINGS", "NORTHGATE SERVICES LTD",
                                 "BLUEWATER INVESTMENTS", "CRESCENT COMPANY SECRETARIAT",
                                 "HARBOUR INTERNATIONAL LIMITED"};

const char* kSicCodes[] = {"01110", "08110", "10110", "35110", "36000", "41100", "46190",
                           "49100", "55100", "58110", "64191", "68100", "69101", "77110",
                           "84110", "85100", "86101", "90010", "94110", "97000", "99000",
                           "62012", "62020", "47110", "56101", "70221", "43210"};

const char* kPostcodeStems[] = {"EC1A 1AA", "SW1A 2BB", "N1 3CC",   "M1 4DD",  "B2 5EE",
                                "LS6 7FF",  "G1 8GG",   "CF10 9HH", "BT1 2JJ", "EH2 3KK",
                                "NE1 4LL",  "BS1 5MM",  "CB2 6NN",  "LE1 7PP", "OX1 8QQ"};

const char* kClosedStatuses[] = {"Active - Proposal to Strike Off", "In Administration",
                                 "Administration Order", "Administrative Receiver"};

struct Firm {
    std::string id;
    YearMonth incorporated;
    int closes_at = -1;    // month index of ClosedLike onset, -1 = never
    int closed_span = 0;   // months spent closed-like before vanish/reopen
    bool reopens = false;
    std::string sic1, sic2;
    std::string postcode;
};

struct Officer {
    std::string name;  // "SURNAME, FORENAME"
    std::string forename;
    std::optional<YearMonth> dob;
    std::string postcode;
};

}  // namespace

void write_fixture(const FixtureOptions& opt) {
    fs::create_directories(opt.out_dir / "snapshots");
    fs::create_directories(opt.out_dir / "officers");
    fs::create_directories(opt.out_dir / "gender");

    std::mt19937_64 rng(opt.seed);
    auto pick = [&](auto& pool) -> std::string {
        std::uniform_int_distribution<size_t> d(0, std::size(pool) - 1);
        return pool[d(rng)];
    };
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto uikely = [&](double p) { return uniform(0.0, 1.0) < p; };

    const int shock_idx = months_between(opt.start, opt.shock);

    // Seasonal monthly weights for incorporations (calendar month effect).
    const double season[12] = {1.3, 1.1, 1.2, 1.0, 0.9, 0.9, 0.8, 0.7, 1.0, 1.1, 0.9, 0.6};

    // ---- Firms ----
    std::vector<Firm> firms;
    firms.reserve(opt.firms);
    int pre_existing = opt.firms * 55 / 100;
    for (int i = 0; i < opt.firms; ++i) {
        Firm f;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "F%06d", i + 1);
        f.id = buf;
        if (i < pre_existing) {
            int back = 1 + static_cast<int>(uniform(0.0, 120.0));
            f.incorporated = opt.start.plus_months(-back);
        } else {
            // Within-window incorporation with seasonality and a surge
            // after the shock month.
            std::vector<double> w(opt.months);
            for (int mm = 0; mm < opt.months; ++mm) {
                YearMonth ym = opt.start.plus_months(mm);
                w[mm] = season[ym.month - 1] * (mm >= shock_idx ? 1.8 : 1.0);
            }
            std::discrete_distribution<int> d(w.begin(), w.end());
            f.incorporated = opt.start.plus_months(d(rng));
        }
        int inc_idx = months_between(opt.start, f.incorporated);
        // Closure hazard: flat before the shock, most closures frozen after.
        for (int mm = std::max(0, inc_idx + 2); mm < opt.months; ++mm) {
            double hazard = mm >= shock_idx ? 0.0012 : 0.004;
            if (uikely(hazard)) {
                f.closes_at = mm;
                f.closed_span = 1 + static_cast<int>(uniform(0.0, 3.0));
                f.reopens = uikely(0.12);
                break;
            }
        }
        f.sic1 = pick(kSicCodes);
        if (uikely(0.25)) f.sic2 = pick(kSicCodes);
        f.postcode = pick(kPostcodeStems);
        firms.push_back(std::move(f));
    }

    // ---- Officers ----
    std::vector<Officer> officers;
    officers.reserve(opt.officers);
    for (int i = 0; i < opt.officers; ++i) {
        Officer o;
        bool woman = uikely(0.35);
        o.forename = woman ? pick(kWomanNames) : pick(kManNames);
        o.name = pick(kSurnames) + ", " + o.forename;
        if (!uikely(0.03)) {
            int year = 1945 + static_cast<int>(uniform(0.0, 55.0));
            int month = 1 + static_cast<int>(uniform(0.0, 12.0));
            o.dob = YearMonth{year, std::min(12, month)};
        }
        o.postcode = pick(kPostcodeStems);
        officers.push_back(std::move(o));
    }

    // Appointments: every firm gets 1-3 officers; a heavy-tailed officer
    // pool reuse makes some officers span many firms.
    struct AppointmentRow {
        int officer = -1;               // -1 = corporate officer
        std::string corporate_name;
        int firm = 0;
        Date appointed{};
        int file_month = 0;  // month index of the officer file carrying the row
    };
    std::vector<AppointmentRow> appointments;
    std::geometric_distribution<int> officer_tail(0.35);
    for (size_t fi = 0; fi < firms.size(); ++fi) {
        const Firm& f = firms[fi];
        int count = 1 + (uikely(0.5) ? 1 : 0) + (uikely(0.15) ? 1 : 0);
        int inc_idx = months_between(opt.start, f.incorporated);
        for (int c = 0; c < count; ++c) {
            AppointmentRow row;
            row.firm = static_cast<int>(fi);
            int oi = officer_tail(rng) * 97 + static_cast<int>(uniform(0.0, 96.0));
            row.officer = oi % opt.officers;
            int day = 1 + static_cast<int>(uniform(0.0, 27.0));
            row.appointed = Date{f.incorporated.year, f.incorporated.month, day};
            row.file_month = std::max(0, inc_idx);  // stock rows land in month 1
            appointments.push_back(row);
        }
        if (uikely(0.03)) {
            AppointmentRow row;
            row.firm = static_cast<int>(fi);
            row.corporate_name = pick(kCorporateNames);
            row.appointed = Date{f.incorporated.year, f.incorporated.month, 1};
            row.file_month = std::max(0, inc_idx);
            appointments.push_back(row);
        }
    }
    std::stable_sort(appointments.begin(), appointments.end(),
                     [](const AppointmentRow& a, const AppointmentRow& b) {
                         if (a.file_month != b.file_month) return a.file_month < b.file_month;
                         return a.firm < b.firm;
                     });

    // ---- Snapshot files ----
    for (int mm = 0; mm < opt.months; ++mm) {
        YearMonth ym = opt.start.plus_months(mm);
        std::ofstream out(opt.out_dir / "snapshots" / ("companies_" + ym.str() + ".csv"));
        write_csv_row(out, {"CompanyNumber", "CompanyName", "CompanyStatus", "IncorporationDate",
                            "DissolutionDate", "SicText_1", "SicText_2", "SicText_3", "SicText_4",
                            "RegAddress.PostCode"});
        for (const Firm& f : firms) {
            int inc_idx = months_between(opt.start, f.incorporated);
            if (mm < inc_idx) continue;  // not yet incorporated
            std::string status = "Active";
            if (f.closes_at >= 0 && mm >= f.closes_at) {
                int end_closed = f.closes_at + f.closed_span;
                if (mm < end_closed) {
                    // deterministic pick from the closed list
                    status = kClosedStatuses[(f.closes_at + f.id.size()) %
                                             std::size(kClosedStatuses)];
                } else if (f.reopens) {
                    status = "Active";
                } else {
                    continue;  // dropped off the register
                }
            }
            write_csv_row(out, {f.id, "FIRM " + f.id, status,
                                Date{f.incorporated.year, f.incorporated.month, 1}.str(), "",
                                f.sic1, f.sic2, "", "", f.postcode});
        }
    }

    // ---- Officer files ----
    {
        size_t ai = 0;
        for (int mm = 0; mm < opt.months; ++mm) {
            YearMonth ym = opt.start.plus_months(mm);
            std::ofstream out(opt.out_dir / "officers" / ("officers_" + ym.str() + ".csv"));
            write_csv_row(out, {"OfficerName", "CompanyNumber", "DateOfBirth", "AppointmentDate",
                                "ResignationDate", "CorrespondencePostCode", "OfficerType"});
            while (ai < appointments.size() && appointments[ai].file_month == mm) {
                const AppointmentRow& row = appointments[ai];
                const Firm& f = firms[row.firm];
                if (row.officer < 0) {
                    write_csv_row(out, {row.corporate_name, f.id, "", row.appointed.str(), "",
                                        f.postcode, "CORPORATE-ENTITY"});
                } else {
                    const Officer& o = officers[row.officer];
                    write_csv_row(out, {o.name, f.id, o.dob ? o.dob->str() : "",
                                        row.appointed.str(), "", o.postcode, "PERSON"});
                }
                ++ai;
            }
        }
    }

    // ---- Gender provider tables (two providers, mild disagreement) ----
    {
        std::ofstream a(opt.out_dir / "gender" / "provider_a.csv");
        std::ofstream b(opt.out_dir / "gender" / "provider_b.csv");
        for (const char* n : kWomanNames) {
            a << n << ",woman,0.98\n";
            b << n << ",woman,0.95\n";
        }
        for (const char* n : kManNames) {
            a << n << ",man,0.97\n";
            b << n << ",man,0.96\n";
        }
        // one name the providers cannot settle
        a << "ALEX,man,0.55\nROBIN,unknown,0.0\n";
        b << "ALEX,woman,0.55\nROBIN,unknown,0.0\n";
    }

    // ---- Schema map and run configuration ----
    {
        std::ofstream schema(opt.out_dir / "schema_map.txt");
        schema << "# default registry bulk-product column names\n";
        schema << "date_order = iso\n";
    }
    {
        YearMonth last = opt.start.plus_months(opt.months - 1);
        YearMonth train_end = opt.shock.plus_months(-2);
        YearMonth pre_start = opt.shock.plus_months(-7);
        std::ofstream cfg(opt.out_dir / "pipeline.conf");
        cfg << "snapshots = snapshots\n";
        cfg << "officers = officers\n";
        cfg << "gender_tables = gender\n";
        cfg << "schema_map = schema_map.txt\n";
        cfg << "train = " << opt.start.str() << ":" << train_end.str() << "\n";
        cfg << "eval = " << opt.shock.str() << ":" << last.str() << "\n";
        cfg << "pre_covid = " << pre_start.str() << ":" << train_end.plus_months(1).str() << "\n";
        cfg << "during_covid = " << opt.shock.str() << ":" << last.str() << "\n";
        cfg << "strata = none,sic,region\n";
        cfg << "fuzzy = 1\n";
        cfg << "elite_cutoff = " << train_end.plus_months(1).str() << "\n";
        cfg << "chow_candidate = " << opt.shock.str() << "\n";
        cfg << "max_p = 2\nmax_q = 2\nmax_P = 1\nmax_Q = 1\nbudget = 40\n";
        cfg << "seed = " << opt.seed << "\n";
    }
}

}  // namespace firmtrack::synth
