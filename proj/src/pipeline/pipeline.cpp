#include "firmtrack/pipeline/pipeline.hpp"

#include <array>
#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "firmtrack/breaks/breaks.hpp"
#include "firmtrack/core/csv.hpp"
#include "firmtrack/core/hash.hpp"
#include "firmtrack/core/strings.hpp"
#include "firmtrack/excess/excess.hpp"
#include "firmtrack/ingest/parse.hpp"
#include "firmtrack/pipeline/report.hpp"
#include "firmtrack/resolve/demographics.hpp"
#include "firmtrack/resolve/elite.hpp"
#include "firmtrack/resolve/identity.hpp"
#include "firmtrack/status/status.hpp"

namespace firmtrack::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<MonthRange> range_of(const KvConfig& kv, const std::string& key) {
    auto v = kv.get(key);
    if (!v) return std::nullopt;
    auto r = MonthRange::parse(*v);
    if (!r) throw ValidationError("config: bad month range for " + key + ": " + *v);
    return r;
}

}  // namespace

PipelineConfig PipelineConfig::from_kv(const KvConfig& kv, const fs::path& base_dir) {
    PipelineConfig cfg;
    auto path_of = [&](const std::string& key) -> fs::path {
        auto v = kv.get(key);
        if (!v || v->empty()) return {};
        fs::path p = *v;
        return p.is_absolute() ? p : base_dir / p;
    };
    cfg.snapshots_dir = path_of("snapshots");
    cfg.officers_dir = path_of("officers");
    cfg.out_dir = path_of("out");
    cfg.gender_tables_dir = path_of("gender_tables");
    cfg.postcode_map = path_of("postcode_map");
    cfg.schema_map = path_of("schema_map");

    if (auto r = range_of(kv, "train")) cfg.train = *r;
    if (auto r = range_of(kv, "eval")) cfg.eval = *r;
    if (auto r = range_of(kv, "pre_covid")) cfg.pre_covid = *r;
    if (auto r = range_of(kv, "during_covid")) cfg.during_covid = *r;
    if (auto v = kv.get("strata")) {
        cfg.strata.clear();
        for (auto& s : split(*v, ',')) cfg.strata.push_back(std::string(trim(s)));
    }
    if (auto v = kv.get("fuzzy")) cfg.fuzzy_threshold = std::stoi(*v);
    if (auto v = kv.get("elite_cutoff")) {
        auto ym = YearMonth::parse(*v);
        if (!ym) throw ValidationError("config: bad elite_cutoff");
        cfg.elite_cutoff = *ym;
    }
    if (auto v = kv.get("chow_candidate")) {
        auto ym = YearMonth::parse(*v);
        if (!ym) throw ValidationError("config: bad chow_candidate");
        cfg.chow_candidate = *ym;
    }
    if (auto v = kv.get("max_p")) cfg.bounds.max_p = std::stoi(*v);
    if (auto v = kv.get("max_q")) cfg.bounds.max_q = std::stoi(*v);
    if (auto v = kv.get("max_P")) cfg.bounds.max_P = std::stoi(*v);
    if (auto v = kv.get("max_Q")) cfg.bounds.max_Q = std::stoi(*v);
    if (auto v = kv.get("budget")) cfg.bounds.budget = std::stoi(*v);
    if (auto v = kv.get("seed")) cfg.seed = std::stoull(*v);
    if (auto v = kv.get("jobs")) cfg.jobs = std::stoi(*v);
    return cfg;
}

void PipelineConfig::validate() const {
    if (snapshots_dir.empty() || !fs::is_directory(snapshots_dir))
        throw ValidationError("snapshots directory missing: " + snapshots_dir.string());
    bool any_company_file = false;
    for (const auto& e : fs::directory_iterator(snapshots_dir)) {
        if (e.path().filename().string().starts_with("companies_")) any_company_file = true;
    }
    if (!any_company_file)
        throw ValidationError("snapshots directory has no companies_YYYY-MM.csv files");
    if (officers_dir.empty() || !fs::is_directory(officers_dir))
        throw ValidationError("officers directory missing: " + officers_dir.string());
    if (out_dir.empty()) throw ValidationError("output directory not configured");
    if (!gender_tables_dir.empty() && !fs::is_directory(gender_tables_dir))
        throw ValidationError("gender tables directory missing: " + gender_tables_dir.string());
    if (!postcode_map.empty() && !fs::is_regular_file(postcode_map))
        throw ValidationError("postcode map missing: " + postcode_map.string());
    if (!schema_map.empty() && !fs::is_regular_file(schema_map))
        throw ValidationError("schema map missing: " + schema_map.string());
    if (!(train.last < eval.first))
        throw ValidationError("train window must end before the eval window starts");
    if (!(pre_covid.last < during_covid.first))
        throw ValidationError("pre-covid window must end before the during-covid window");
    if (fuzzy_threshold < 0) throw ValidationError("fuzzy threshold must be >= 0");
    if (jobs < 1) throw ValidationError("jobs must be >= 1");
}

std::string Manifest::to_json() const {
    json j;
    j["stages"] = json::array();
    for (const auto& s : stages) {
        j["stages"].push_back({{"stage", s.stage},
                               {"input_hash", s.input_hash},
                               {"output_hash", s.output_hash},
                               {"duration_ms", s.duration_ms},
                               {"status", s.status}});
    }
    return j.dump(2) + "\n";
}

Manifest Manifest::load(const fs::path& path) {
    Manifest m;
    std::ifstream in(path);
    if (!in) return m;
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("stages")) return m;
    for (const auto& s : j["stages"]) {
        StageRecord r;
        r.stage = s.value("stage", "");
        r.input_hash = s.value("input_hash", "");
        r.output_hash = s.value("output_hash", "");
        r.duration_ms = s.value("duration_ms", 0.0);
        r.status = s.value("status", "");
        m.stages.push_back(std::move(r));
    }
    return m;
}

void Manifest::save(const fs::path& path) const {
    std::ofstream out(path);
    out << to_json();
}

const StageRecord* Manifest::find(const std::string& stage) const {
    for (const auto& s : stages)
        if (s.stage == stage) return &s;
    return nullptr;
}

namespace {

std::vector<fs::path> sorted_dir(const fs::path& dir, const std::string& prefix) {
    std::vector<fs::path> out;
    if (dir.empty() || !fs::is_directory(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (prefix.empty() || e.path().filename().string().starts_with(prefix))
            out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string hash_files(const std::vector<fs::path>& files) {
    Fnv1a h;
    for (const auto& f : files) {
        h.update(f.filename().string());
        h.update(hash_file_hex(f));
    }
    return h.hex();
}

using OutputsProvider = std::function<std::vector<fs::path>()>;

/// Runs stages with hash-based caching: a stage is skipped when its input
/// signature matches the previous manifest and its outputs still hash to
/// the recorded value. A failed stage marks the rest skipped.
class StageRunner {
public:
    explicit StageRunner(Manifest previous) : previous_(std::move(previous)) {}

    void run(const std::string& name, const std::string& input_signature,
             const OutputsProvider& outputs, const std::function<void()>& body) {
        StageRecord rec;
        rec.stage = name;
        rec.input_hash = hash_string_hex(input_signature);

        if (failed_) {
            rec.status = "skipped";
            manifest_.stages.push_back(rec);
            return;
        }

        const StageRecord* prev = previous_.find(name);
        if (prev && prev->input_hash == rec.input_hash &&
            (prev->status == "ran" || prev->status == "cached")) {
            std::vector<fs::path> files = outputs();
            bool intact = !files.empty();
            for (const auto& f : files) {
                if (!fs::exists(f)) {
                    intact = false;
                    break;
                }
            }
            if (intact && hash_files(files) == prev->output_hash) {
                rec.output_hash = prev->output_hash;
                rec.status = "cached";
                manifest_.stages.push_back(rec);
                return;
            }
        }

        auto t0 = std::chrono::steady_clock::now();
        try {
            body();
        } catch (const std::exception& e) {
            rec.status = "failed";
            rec.duration_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
            manifest_.stages.push_back(rec);
            failed_ = true;
            failure_ = name + ": " + e.what();
            return;
        }
        rec.duration_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        rec.output_hash = hash_files(outputs());
        rec.status = "ran";
        manifest_.stages.push_back(rec);
    }

    bool failed() const { return failed_; }
    const std::string& failure() const { return failure_; }
    Manifest take_manifest() { return std::move(manifest_); }

private:
    Manifest previous_;
    Manifest manifest_;
    bool failed_ = false;
    std::string failure_;
};

std::string config_signature(const PipelineConfig& cfg) {
    std::ostringstream os;
    os << cfg.train.str() << '|' << cfg.eval.str() << '|' << cfg.pre_covid.str() << '|'
       << cfg.during_covid.str() << '|' << cfg.fuzzy_threshold << '|' << cfg.elite_cutoff.str()
       << '|' << cfg.chow_candidate.str() << '|' << cfg.bounds.max_p << ',' << cfg.bounds.max_q
       << ',' << cfg.bounds.max_P << ',' << cfg.bounds.max_Q << ',' << cfg.bounds.budget << '|'
       << cfg.seed;
    for (const auto& s : cfg.strata) os << '|' << s;
    return os.str();
}

}  // namespace

Manifest run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    const fs::path manifest_path = cfg.out_dir / "manifest.json";
    StageRunner runner(Manifest::load(manifest_path));

    const std::string cfg_sig = config_signature(cfg);
    auto input_files = sorted_dir(cfg.snapshots_dir, "companies_");
    auto officer_files = sorted_dir(cfg.officers_dir, "officers_");
    std::vector<fs::path> all_inputs = input_files;
    all_inputs.insert(all_inputs.end(), officer_files.begin(), officer_files.end());
    if (!cfg.schema_map.empty()) all_inputs.push_back(cfg.schema_map);
    if (!cfg.postcode_map.empty()) all_inputs.push_back(cfg.postcode_map);
    for (const auto& g : sorted_dir(cfg.gender_tables_dir, "")) all_inputs.push_back(g);
    const std::string raw_sig = cfg_sig + "|" + hash_files(all_inputs);

    const fs::path norm_companies = cfg.out_dir / "normalized_companies.csv";
    const fs::path norm_officers = cfg.out_dir / "normalized_officers.csv";
    const fs::path rejections_path = cfg.out_dir / "rejections.log";
    const fs::path events_path = cfg.out_dir / "events.csv";
    const fs::path series_dir = cfg.out_dir / "series";
    const fs::path persons_path = cfg.out_dir / "persons.csv";
    const fs::path elite_path = cfg.out_dir / "elite_table.csv";
    const fs::path model_path = cfg.out_dir / "model_net_active.txt";
    const fs::path trace_path = cfg.out_dir / "search_trace.csv";
    const fs::path breaks_path = cfg.out_dir / "breaks.csv";
    const fs::path sector_path = cfg.out_dir / "sector_table.csv";
    const fs::path plot_dir = cfg.out_dir / "plot_data";

    auto region_table = [&]() -> resolve::RegionTable {
        if (cfg.postcode_map.empty()) return resolve::RegionTable::builtin();
        return resolve::RegionTable::load(cfg.postcode_map);
    };

    auto fixed = [](std::vector<fs::path> files) {
        return [files = std::move(files)]() { return files; };
    };

    // ---- ingest ----
    runner.run(
        "ingest", raw_sig + "|ingest", fixed({norm_companies, norm_officers, rejections_path}),
        [&] {
            ingest::SchemaMap schema = cfg.schema_map.empty() ? ingest::SchemaMap::defaults()
                                                              : ingest::SchemaMap::load(cfg.schema_map);
            ingest::SnapshotArchive archive =
                ingest::load_archive(cfg.snapshots_dir, cfg.officers_dir, schema);
            ingest::write_normalized_companies(norm_companies, archive);
            ingest::write_normalized_officers(norm_officers, archive);
            std::ofstream rej(rejections_path);
            rej << archive.rejections.to_text();
        });

    // ---- diff ----
    auto diff_outputs = [&]() {
        std::vector<fs::path> files{events_path};
        for (auto& f : sorted_dir(series_dir, "series_")) files.push_back(f);
        return files;
    };
    runner.run("diff", raw_sig + "|diff", diff_outputs, [&] {
        auto companies = ingest::load_normalized_companies(norm_companies);
        std::set<YearMonth> month_set;
        for (const auto& r : companies) month_set.insert(r.snapshot_month);
        std::vector<YearMonth> months(month_set.begin(), month_set.end());
        if (months.empty()) throw StageError("no snapshot months found");

        std::map<std::string, std::string> sic_map, region_map;
        resolve::RegionTable regions = region_table();
        std::map<YearMonth, std::vector<ingest::CompanySnapshotRecord>> by_month_map;
        for (auto& r : companies) {
            if (!r.sic_codes.empty()) sic_map[r.company_id] = status::sic_section(r.sic_codes[0]);
            if (r.postcode) {
                auto reg = regions.map_region(*r.postcode);
                if (reg) region_map[r.company_id] = *reg;
            }
            by_month_map[r.snapshot_month].push_back(std::move(r));
        }
        std::vector<std::vector<ingest::CompanySnapshotRecord>> by_month;
        for (auto ym : months) by_month.push_back(std::move(by_month_map[ym]));

        ingest::RejectionLog rejections;
        auto timelines = status::build_timelines(by_month, months, rejections);
        auto events = status::derive_events(timelines, months);

        std::ofstream ev(events_path);
        write_csv_row(ev, {"company_id", "month", "event", "inferred_dissolution"});
        for (const auto& e : events) {
            write_csv_row(ev, {e.company_id, e.month.str(),
                               std::string(status::event_name(e.event)),
                               e.inferred_dissolution ? "1" : "0"});
        }

        fs::create_directories(series_dir);
        for (const auto& stratum : cfg.strata) {
            std::map<std::string, std::string> mapping;
            if (stratum == "sic") mapping = sic_map;
            else if (stratum == "region") mapping = region_map;
            else if (stratum == "none") {
                for (const auto& [id, tl] : timelines) {
                    (void)tl;
                    mapping[id] = "all";
                }
            } else {
                throw StageError("unknown stratum kind: " + stratum);
            }
            auto initial = status::initial_active_by_stratum(timelines, mapping, months.front());
            auto series = status::aggregate_events(events, mapping, months, initial);
            for (const auto& s : series) {
                std::string label = s.stratum;
                for (char& c : label)
                    if (c == ' ' || c == '/') c = '_';
                std::ofstream out(series_dir / ("series_" + stratum + "_" + label + ".csv"));
                write_csv_row(out, {"month", "opened", "closed", "reopened", "net_active"});
                for (int i = 0; i < s.length(); ++i) {
                    write_csv_row(out,
                                  {s.start.plus_months(i).str(), std::to_string(s.opened[i]),
                                   std::to_string(s.closed[i]), std::to_string(s.reopened[i]),
                                   std::to_string(s.net_active[i])});
                }
            }
        }
    });

    // ---- resolve ----
    runner.run("resolve", raw_sig + "|resolve", fixed({persons_path, elite_path}), [&] {
        auto officer_records = ingest::load_normalized_officers(norm_officers);
        auto partition = ingest::filter_corporate_officers(std::move(officer_records));
        auto persons = resolve::resolve_identities(partition.persons, cfg.fuzzy_threshold);

        std::vector<resolve::GenderProviderTable> providers;
        for (const auto& f : sorted_dir(cfg.gender_tables_dir, ""))
            providers.push_back(resolve::GenderProviderTable::load(f, f.stem().string()));
        resolve::RegionTable regions = region_table();

        std::ofstream out(persons_path);
        write_csv_row(out, {"person_id", "first_forename", "surname", "birth_month", "gender",
                            "region", "prior_firms_at_cutoff", "appointments", "match_distance",
                            "ambiguous", "corporate_share"});
        char share_buf[32];
        std::snprintf(share_buf, sizeof(share_buf), "%.6f", partition.corporate_share);
        for (auto& p : persons) {
            p.gender = resolve::infer_gender(p.key.first_forename, providers);
            std::string region;
            if (!p.postcode.empty()) {
                auto rg = regions.map_region(p.postcode);
                if (rg) region = *rg;
            }
            write_csv_row(out, {std::to_string(p.person_id), p.key.first_forename, p.key.surname,
                                p.key.birth_month ? p.key.birth_month->str() : "",
                                std::string(resolve::gender_name(p.gender)), region,
                                std::to_string(p.prior_firm_count(cfg.elite_cutoff)),
                                std::to_string(p.appointments.size()),
                                std::to_string(p.match_distance), p.ambiguous ? "1" : "0",
                                share_buf});
        }

        auto rows = resolve::elite_table(persons, cfg.elite_cutoff, cfg.during_covid);
        std::ofstream elite(elite_path);
        elite << resolve::elite_table_to_csv(rows);
    });

    // ---- series ----
    std::vector<fs::path> measure_files;
    for (const char* m : {"opened", "closed", "no_change", "net_active"})
        measure_files.push_back(series_dir / (std::string("measure_") + m + "_all.csv"));
    runner.run("series", raw_sig + "|series", fixed(measure_files), [&] {
        std::ifstream ev(events_path);
        if (!ev) throw StageError("events.csv missing");
        CsvReader reader(ev);
        std::vector<std::string> row;
        reader.next(row);  // header
        std::map<YearMonth, std::array<long, 4>> counts;
        while (reader.next(row)) {
            if (row.size() < 3) continue;
            auto ym = YearMonth::parse(row[1]);
            if (!ym) continue;
            auto& c = counts[*ym];
            if (row[2] == "Opened") ++c[0];
            else if (row[2] == "Closed") ++c[1];
            else if (row[2] == "Reopened") ++c[2];
            else ++c[3];
        }
        auto companies = ingest::load_normalized_companies(norm_companies);
        if (companies.empty()) throw StageError("no normalized companies");
        YearMonth lo = companies.front().snapshot_month, hi = lo;
        std::set<std::string> first_active;
        for (const auto& r : companies) {
            if (r.snapshot_month < lo) lo = r.snapshot_month;
            if (hi < r.snapshot_month) hi = r.snapshot_month;
        }
        for (const auto& r : companies) {
            if (r.snapshot_month == lo &&
                status::classify_status(r.status) == status::StatusClass::Active)
                first_active.insert(r.company_id);
        }

        fs::create_directories(series_dir);
        int n = months_between(lo, hi) + 1;
        std::vector<std::array<long, 4>> by_month(n, {0, 0, 0, 0});
        for (const auto& [ym, c] : counts) {
            int idx = months_between(lo, ym);
            if (idx >= 0 && idx < n) by_month[idx] = c;
        }
        auto write_measure = [&](const std::string& name, auto getter) {
            std::ofstream out(series_dir / ("measure_" + name + "_all.csv"));
            out << "month,value\n";
            for (int i = 0; i < n; ++i) out << lo.plus_months(i).str() << ',' << getter(i) << '\n';
        };
        write_measure("opened", [&](int i) { return by_month[i][0]; });
        write_measure("closed", [&](int i) { return by_month[i][1]; });
        write_measure("no_change", [&](int i) { return by_month[i][3]; });
        long running = static_cast<long>(first_active.size());
        std::vector<long> net(n);
        for (int i = 0; i < n; ++i) {
            running += by_month[i][0] + by_month[i][2] - by_month[i][1];
            net[i] = running;
        }
        write_measure("net_active", [&](int i) { return net[i]; });
    });

    // ---- fit ----
    runner.run("fit", raw_sig + "|fit", fixed({model_path, trace_path}), [&] {
        auto series = ts::MonthlySeries::load_csv(series_dir / "measure_net_active_all.csv");
        auto train = series.window(std::max(cfg.train.first, series.start),
                                   std::min(cfg.train.last, series.last_month()));
        auto result = select::auto_select(train, cfg.bounds);
        std::ofstream model(model_path);
        model << result.best.dump();
        std::ofstream trace(trace_path);
        trace << result.trace.to_csv();
    });

    // ---- excess ----
    std::vector<fs::path> excess_outputs;
    for (const char* m : {"net_active", "opened", "closed"})
        excess_outputs.push_back(cfg.out_dir / (std::string("excess_") + m + ".csv"));
    excess_outputs.push_back(cfg.out_dir / "excess_quarters.csv");
    runner.run("excess", raw_sig + "|excess", fixed(excess_outputs), [&] {
        auto run_one = [&](const std::string& m) {
            auto series = ts::MonthlySeries::load_csv(series_dir / ("measure_" + m + "_all.csv"));
            excess::CounterfactualConfig ecfg;
            ecfg.bounds = cfg.bounds;
            ecfg.train = MonthRange{std::max(cfg.train.first, series.start), cfg.train.last};
            YearMonth eval_last = std::min(cfg.eval.last, series.last_month());
            if (eval_last < cfg.eval.first) eval_last = cfg.eval.last;  // let validation reject it
            ecfg.eval = MonthRange{cfg.eval.first, eval_last};
            auto report = excess::run_counterfactual(series, ecfg, m);
            std::ofstream out(cfg.out_dir / ("excess_" + m + ".csv"));
            out << report.to_csv();
            if (m == "opened") {
                std::ofstream q(cfg.out_dir / "excess_quarters.csv");
                q << excess::quarters_to_csv(excess::quarterly_rollup(report));
            }
        };
        const std::array<std::string, 3> measures{"net_active", "opened", "closed"};
        if (cfg.jobs > 1) {
            std::vector<std::future<void>> futures;
            for (const auto& m : measures)
                futures.push_back(std::async(std::launch::async, run_one, m));
            for (auto& f : futures) f.get();
        } else {
            for (const auto& m : measures) run_one(m);
        }
    });

    // ---- breaks ----
    runner.run("breaks", raw_sig + "|breaks", fixed({breaks_path}), [&] {
        std::vector<std::pair<std::string, ts::MonthlySeries>> set;
        for (const char* m : {"opened", "closed", "no_change"}) {
            auto series =
                ts::MonthlySeries::load_csv(series_dir / (std::string("measure_") + m + "_all.csv"));
            set.emplace_back(std::string(m) + "_raw", series);
            auto adj = breaks::seasonally_adjust(series, std::max(cfg.train.first, series.start),
                                                 std::min(cfg.train.last, series.last_month()));
            set.emplace_back(std::string(m) + "_sa", std::move(adj));
        }
        auto rows = breaks::run_battery(set, cfg.chow_candidate);
        std::ofstream out(breaks_path);
        out << breaks::battery_to_csv(rows);
    });

    // ---- report ----
    auto report_outputs = [&]() {
        std::vector<fs::path> files{sector_path, cfg.out_dir / "report_elite_table.csv"};
        for (auto& f : sorted_dir(plot_dir, "")) files.push_back(f);
        return files;
    };
    runner.run("report", raw_sig + "|report", report_outputs, [&] {
        fs::create_directories(plot_dir);
        emit_report(cfg, norm_companies, norm_officers, sector_path, plot_dir);
        fs::copy_file(elite_path, cfg.out_dir / "report_elite_table.csv",
                      fs::copy_options::overwrite_existing);
    });

    Manifest manifest = runner.take_manifest();
    manifest.save(manifest_path);
    if (runner.failed()) throw StageError(runner.failure());
    return manifest;
}

}  // namespace firmtrack::pipeline
