#pragma once

#include <optional>
#include <string>
#include <vector>

#include "firmtrack/ts/sarima.hpp"

namespace firmtrack::select {

struct SearchBounds {
    int max_p = 5;
    int max_q = 5;
    int max_P = 2;
    int max_Q = 2;
    int max_d = 1;
    int max_D = 1;
    bool allow_constant = true;
    int budget = 250;  // maximum number of fitted models
};

struct TraceEntry {
    ts::SarimaSpec spec;
    double aicc = 0.0;
    bool fit_ok = false;
    bool accepted = false;  // became the incumbent
};

struct SearchTrace {
    std::vector<TraceEntry> visited;
    std::string stopping_reason;

    std::string to_csv() const;
};

struct SearchResult {
    ts::FittedSarima best;
    SearchTrace trace;
};

/// Stepwise AICc minimization over SARIMA orders with d, D held fixed.
/// Starts from the usual four-model set, walks +-1 neighborhoods of the
/// incumbent (constant toggle included), accepts strict improvements, and
/// stops when no neighbor improves or the fit budget is exhausted. Failed
/// fits score +infinity. Throws when no candidate fits at all.
SearchResult stepwise_search(const ts::MonthlySeries& series, int d, int D,
                             const SearchBounds& bounds, const ts::FitOptions& fit_opts = {},
                             const std::vector<ts::SarimaSpec>& seed_specs = {});

/// Differencing orders from the KPSS and Canova-Hansen tests, then the
/// stepwise order search.
SearchResult auto_select(const ts::MonthlySeries& series, const SearchBounds& bounds = {},
                         const ts::FitOptions& fit_opts = {});

}  // namespace firmtrack::select
