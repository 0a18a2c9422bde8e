#include "firmtrack/select/stepwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "firmtrack/select/tests.hpp"

namespace firmtrack::select {

namespace {

using ts::SarimaSpec;

auto spec_key(const SarimaSpec& s) {
    return std::make_tuple(s.p, s.q, s.P, s.Q, s.with_constant);
}

/// Tie order: fewer parameters first, then lexicographic spec order.
bool better_tie(const SarimaSpec& a, const SarimaSpec& b) {
    if (a.criterion_param_count() != b.criterion_param_count())
        return a.criterion_param_count() < b.criterion_param_count();
    return std::make_tuple(a.p, a.d, a.q, a.P, a.D, a.Q, !a.with_constant) <
           std::make_tuple(b.p, b.d, b.q, b.P, b.D, b.Q, !b.with_constant);
}

}  // namespace

std::string SearchTrace::to_csv() const {
    std::ostringstream os;
    os << "order,spec,aicc,fit_ok,accepted\n";
    os.precision(12);
    for (size_t i = 0; i < visited.size(); ++i) {
        const auto& e = visited[i];
        os << i << ',' << e.spec.str() << ',' << e.aicc << ',' << (e.fit_ok ? 1 : 0) << ','
           << (e.accepted ? 1 : 0) << '\n';
    }
    os << "# stopped: " << stopping_reason << '\n';
    return os.str();
}

SearchResult stepwise_search(const ts::MonthlySeries& series, int d, int D,
                             const SearchBounds& bounds, const ts::FitOptions& fit_opts,
                             const std::vector<SarimaSpec>& seed_specs) {
    const int m = series.frequency;
    const bool seasonal = m > 1;
    const bool constant_ok = bounds.allow_constant && (d + D) <= 1;

    SearchResult result;
    SearchTrace& trace = result.trace;
    std::map<decltype(spec_key(SarimaSpec{})), double> seen;
    std::optional<ts::FittedSarima> best;
    double best_aicc = std::numeric_limits<double>::infinity();
    SarimaSpec best_spec;
    int fits = 0;
    bool budget_hit = false;
    // The start set is always evaluated in full; the budget gates the walk.
    bool enforce_budget = false;

    auto evaluate = [&](SarimaSpec spec) {
        spec.d = d;
        spec.D = seasonal ? D : 0;
        spec.period = m;
        if (!seasonal) spec.P = spec.Q = 0;
        spec.p = std::clamp(spec.p, 0, bounds.max_p);
        spec.q = std::clamp(spec.q, 0, bounds.max_q);
        spec.P = std::clamp(spec.P, 0, seasonal ? bounds.max_P : 0);
        spec.Q = std::clamp(spec.Q, 0, seasonal ? bounds.max_Q : 0);
        if (spec.with_constant && !constant_ok) spec.with_constant = false;

        auto key = spec_key(spec);
        if (seen.count(key)) return;
        if (enforce_budget && fits >= bounds.budget) {
            budget_hit = true;
            return;
        }
        ++fits;

        double aicc = std::numeric_limits<double>::infinity();
        bool ok = false;
        std::optional<ts::FittedSarima> fitted;
        try {
            ts::FittedSarima f = ts::fit(series, spec, fit_opts);
            if (f.converged && std::isfinite(f.aicc)) {
                aicc = f.aicc;
                ok = true;
                fitted = std::move(f);
            }
        } catch (const std::exception&) {
            // unusable candidate; +inf AICc
        }
        seen.emplace(key, aicc);
        trace.visited.push_back({spec, aicc, ok, false});

        if (ok && (aicc < best_aicc ||
                   (aicc == best_aicc && better_tie(spec, best_spec)))) {
            best_aicc = aicc;
            best_spec = spec;
            best = std::move(fitted);
            trace.visited.back().accepted = true;
        }
    };

    // Start set per the usual stepwise recipe, plus caller-seeded specs.
    std::vector<SarimaSpec> starts = {
        {2, d, 2, 1, D, 1, m, false},
        {0, d, 0, 0, D, 0, m, false},
        {1, d, 0, 1, D, 0, m, false},
        {0, d, 1, 0, D, 1, m, false},
    };
    for (const auto& s : seed_specs) starts.push_back(s);
    size_t base_count = starts.size();
    for (size_t i = 0; i < base_count; ++i) {
        if (constant_ok) {
            SarimaSpec withc = starts[i];
            withc.with_constant = true;
            starts.push_back(withc);
        }
    }
    for (const auto& s : starts) evaluate(s);
    enforce_budget = true;
    if (fits >= bounds.budget) budget_hit = true;

    if (!best) {
        if (trace.visited.empty()) throw std::runtime_error("stepwise_search: no candidate models");
        throw std::runtime_error("stepwise_search: no admissible model (all fits failed)");
    }

    while (!budget_hit) {
        SarimaSpec cur = best_spec;
        double incumbent = best_aicc;
        std::vector<SarimaSpec> neighbors;
        auto push = [&](int dp, int dq, int dP, int dQ) {
            SarimaSpec s = cur;
            s.p += dp;
            s.q += dq;
            s.P += dP;
            s.Q += dQ;
            if (s.p < 0 || s.q < 0 || s.P < 0 || s.Q < 0) return;
            if (s.p > bounds.max_p || s.q > bounds.max_q) return;
            if (s.P > bounds.max_P || s.Q > bounds.max_Q) return;
            neighbors.push_back(s);
        };
        push(-1, 0, 0, 0);
        push(+1, 0, 0, 0);
        push(0, -1, 0, 0);
        push(0, +1, 0, 0);
        if (seasonal) {
            push(0, 0, -1, 0);
            push(0, 0, +1, 0);
            push(0, 0, 0, -1);
            push(0, 0, 0, +1);
        }
        if (constant_ok) {
            SarimaSpec s = cur;
            s.with_constant = !s.with_constant;
            neighbors.push_back(s);
        }
        for (const auto& s : neighbors) evaluate(s);
        if (best_aicc >= incumbent) break;  // no strict improvement
    }

    trace.stopping_reason = budget_hit ? "budget exhausted" : "no neighbor improves";
    result.best = std::move(*best);
    return result;
}

SearchResult auto_select(const ts::MonthlySeries& series, const SearchBounds& bounds,
                         const ts::FitOptions& fit_opts) {
    int D = select_D(series, series.frequency, bounds.max_D);
    ts::MonthlySeries for_d = D > 0 ? ts::difference(series, 0, D, series.frequency) : series;
    int d = select_d(for_d, bounds.max_d);
    return stepwise_search(series, d, D, bounds, fit_opts);
}

}  // namespace firmtrack::select
