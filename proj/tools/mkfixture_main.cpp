// firmtrack-mkfixture: deterministic synthetic registry generator for
// demos and end-to-end testing.

#include <cstdio>

#include <CLI11.hpp>

#include "firmtrack/synth/fixture.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic registry fixture generator"};
    firmtrack::synth::FixtureOptions opt;
    std::string out_dir, start = "2018-01", shock = "2020-03";
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--months", opt.months, "window length in months");
    app.add_option("--firms", opt.firms, "number of firms");
    app.add_option("--officers", opt.officers, "officer pool size");
    app.add_option("--seed", opt.seed, "generator seed");
    app.add_option("--start", start, "first month YYYY-MM");
    app.add_option("--shock", shock, "surge month YYYY-MM");
    CLI11_PARSE(app, argc, argv);

    auto s = firmtrack::YearMonth::parse(start);
    auto k = firmtrack::YearMonth::parse(shock);
    if (!s || !k) {
        std::fprintf(stderr, "bad month argument\n");
        return 2;
    }
    opt.start = *s;
    opt.shock = *k;
    opt.out_dir = out_dir;
    firmtrack::synth::write_fixture(opt);
    std::printf("fixture written to %s\n", out_dir.c_str());
    return 0;
}
