#include "firmtrack/ts/series.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/csv.hpp"
#include "firmtrack/core/strings.hpp"

namespace firmtrack::ts {

int MonthlySeries::index_of(YearMonth m) const {
    int idx = months_between(start, m);
    if (idx < 0 || idx >= static_cast<int>(values.size())) return -1;
    return idx;
}

MonthlySeries MonthlySeries::window(YearMonth first, YearMonth last) const {
    int i = index_of(first);
    int j = index_of(last);
    if (i < 0 || j < 0 || j < i) throw std::out_of_range("series window outside sample");
    MonthlySeries out;
    out.start = first;
    out.frequency = frequency;
    out.values.assign(values.begin() + i, values.begin() + j + 1);
    return out;
}

MonthlySeries MonthlySeries::load_csv(const std::filesystem::path& path, int frequency) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path.string());
    CsvReader reader(in);
    std::vector<std::string> fields;
    MonthlySeries out;
    out.frequency = frequency;
    bool first_row = true;
    while (reader.next(fields)) {
        if (fields.size() < 2) continue;
        if (first_row) {
            first_row = false;
            if (!YearMonth::parse(fields[0])) continue;  // header row
        }
        auto ym = YearMonth::parse(fields[0]);
        if (!ym) throw std::runtime_error("bad month in series file: " + fields[0]);
        double v = std::stod(fields[1]);
        if (out.values.empty()) {
            out.start = *ym;
        } else if (ym->index() != out.start.index() + static_cast<int>(out.values.size())) {
            throw std::runtime_error("series file has a gap at " + fields[0]);
        }
        out.values.push_back(v);
    }
    if (out.values.empty()) throw std::runtime_error("empty series file: " + path.string());
    return out;
}

void MonthlySeries::save_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write series file: " + path.string());
    out << "month,value\n";
    for (size_t i = 0; i < values.size(); ++i) {
        std::ostringstream v;
        v.precision(15);
        v << values[i];
        out << month_at(i).str() << ',' << v.str() << '\n';
    }
}

MonthlySeries difference(const MonthlySeries& series, int d, int D, int period) {
    if (d < 0 || D < 0 || period < 1) throw std::invalid_argument("difference: bad orders");
    if (static_cast<int>(series.size()) <= d + D * period)
        throw std::length_error("difference: series too short for requested orders");
    std::vector<double> v = series.values;
    for (int k = 0; k < D; ++k) {
        std::vector<double> next(v.size() - period);
        for (size_t i = period; i < v.size(); ++i) next[i - period] = v[i] - v[i - period];
        v = std::move(next);
    }
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(v.size() - 1);
        for (size_t i = 1; i < v.size(); ++i) next[i - 1] = v[i] - v[i - 1];
        v = std::move(next);
    }
    MonthlySeries out;
    out.start = series.start.plus_months(d + D * period);
    out.frequency = series.frequency;
    out.values = std::move(v);
    return out;
}

}  // namespace firmtrack::ts
