#include "firmtrack/breaks/breaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/linalg.hpp"
#include "firmtrack/core/stats.hpp"

namespace firmtrack::breaks {

namespace {

double cusum_boundary_constant(double level) {
    // Crossing constants for the Brownian motion boundary a*(1+2*lambda).
    if (level >= 0.10) return 0.850;
    if (level >= 0.05) return 0.948;
    return 1.143;  // 1%
}

}  // namespace

BreakResult cusum_test(const ts::MonthlySeries& series, double level) {
    const auto& y = series.values;
    const int n = static_cast<int>(y.size());
    if (n < 10) throw std::length_error("cusum_test: need at least 10 observations");

    BreakResult res;
    res.test = "cusum";

    // Recursive residuals of the mean-only model.
    std::vector<double> w;
    w.reserve(n - 1);
    double run_sum = y[0];
    for (int t = 1; t < n; ++t) {
        double pred = run_sum / t;
        w.push_back((y[t] - pred) / std::sqrt(1.0 + 1.0 / t));
        run_sum += y[t];
    }
    const int m = static_cast<int>(w.size());
    double sigma = std::sqrt(stats::sample_variance(w));
    if (sigma < 1e-12) {
        res.statistic = 0.0;
        res.note = "degenerate series";
        return res;
    }

    const double a = cusum_boundary_constant(level);
    std::vector<double> path(m);
    double cum = 0.0;
    double max_ratio = 0.0;
    int first_cross = -1;
    for (int r = 0; r < m; ++r) {
        cum += w[r];
        path[r] = cum / (sigma * std::sqrt(static_cast<double>(m)));
        double bound = a * (1.0 + 2.0 * static_cast<double>(r + 1) / m);
        double ratio = std::fabs(path[r]) / bound;
        if (ratio > max_ratio) max_ratio = ratio;
        if (ratio > 1.0 && first_cross < 0) first_cross = r;
    }
    res.statistic = max_ratio;
    res.significant = first_cross >= 0;
    if (first_cross >= 0) {
        // The boundary crossing lags the shift itself, so date the break by
        // the least-squares single-split of the observations up to the
        // alarm; the alarm month is kept in the note.
        int upto = std::min(first_cross + 1, n - 1);  // observation index of the alarm
        std::vector<double> ps(upto + 2, 0.0), pss(upto + 2, 0.0);
        for (int i = 0; i <= upto; ++i) {
            ps[i + 1] = ps[i] + y[i];
            pss[i + 1] = pss[i] + y[i] * y[i];
        }
        auto cost = [&](int i, int j) {
            int len = j - i + 1;
            double s = ps[j + 1] - ps[i];
            return pss[j + 1] - pss[i] - s * s / len;
        };
        int split = 1;
        double best = std::numeric_limits<double>::infinity();
        for (int s = 1; s <= upto; ++s) {
            double v = cost(0, s - 1) + cost(s, upto);
            if (v < best) {
                best = v;
                split = s;
            }
        }
        res.break_dates.push_back(series.month_at(split));
        res.note = "alarm at " + series.month_at(first_cross + 1).str();
    }
    return res;
}

BreakResult chow_test(const ts::MonthlySeries& series, YearMonth candidate, double level) {
    const auto& y = series.values;
    const int n = static_cast<int>(y.size());
    int split = series.index_of(candidate);
    if (split < 0) throw std::invalid_argument("chow_test: candidate outside the sample");
    // Second regime starts at the candidate month.
    int n1 = split, n2 = n - split;
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("chow_test: segment too short");

    auto ssr = [&](int from, int count) {
        double s = 0.0, ss = 0.0;
        for (int i = from; i < from + count; ++i) {
            s += y[i];
            ss += y[i] * y[i];
        }
        return ss - s * s / count;
    };
    double pooled = ssr(0, n);
    double s1 = ssr(0, n1);
    double s2 = ssr(n1, n2);

    BreakResult res;
    res.test = "chow";
    res.break_dates.push_back(candidate);
    double unexplained = s1 + s2;
    if (unexplained <= 1e-300) {
        bool shift = pooled > 1e-12;
        res.statistic = shift ? std::numeric_limits<double>::infinity() : 0.0;
        res.p_value = shift ? 0.0 : 1.0;
        res.significant = shift;
        res.note = "degenerate segments";
        return res;
    }
    double f = (pooled - unexplained) / (unexplained / (n - 2));
    res.statistic = f;
    res.p_value = 1.0 - stats::f_cdf(f, 1.0, static_cast<double>(n - 2));
    res.significant = res.p_value < level;
    return res;
}

BreakResult bai_perron(const ts::MonthlySeries& series, int max_breaks, double min_segment) {
    const auto& y = series.values;
    const int n = static_cast<int>(y.size());
    int h = static_cast<int>(std::ceil(min_segment * n));
    if (h < 3) h = 3;
    if (n < h) throw std::length_error("bai_perron: series shorter than a single segment");

    BreakResult res;
    res.test = "bai_perron";

    int feasible = n / h - 1;
    int kmax = std::min(max_breaks, feasible);
    if (kmax < max_breaks) res.note = "max_breaks clipped to " + std::to_string(kmax);
    if (kmax < 0) kmax = 0;

    // Prefix sums for O(1) segment SSR.
    std::vector<double> ps(n + 1, 0.0), pss(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + y[i];
        pss[i + 1] = pss[i] + y[i] * y[i];
    }
    auto cost = [&](int i, int j) {  // inclusive segment [i, j]
        int len = j - i + 1;
        double s = ps[j + 1] - ps[i];
        return pss[j + 1] - pss[i] - s * s / len;
    };

    const double inf = std::numeric_limits<double>::infinity();
    // dp[k][j]: minimal SSR of y[0..j] split into k+1 segments of length >= h.
    std::vector<std::vector<double>> dp(kmax + 1, std::vector<double>(n, inf));
    std::vector<std::vector<int>> arg(kmax + 1, std::vector<int>(n, -1));
    for (int j = h - 1; j < n; ++j) dp[0][j] = cost(0, j);
    for (int k = 1; k <= kmax; ++k) {
        for (int j = (k + 1) * h - 1; j < n; ++j) {
            for (int l = k * h - 1; l + h <= j; ++l) {
                double v = dp[k - 1][l] + cost(l + 1, j);
                if (v < dp[k][j]) {
                    dp[k][j] = v;
                    arg[k][j] = l;
                }
            }
        }
    }

    // Break count by the modified (LWZ-style) information criterion, which
    // penalizes location-optimized breaks harder than plain BIC:
    //   ln(SSR_k / (n - p_k)) + p_k * 0.299 * (ln n)^2.1 / n,
    // with p_k = (k+1) segment means + k break dates.
    int best_k = 0;
    double best_crit = inf;
    const double logn = std::log(static_cast<double>(n));
    for (int k = 0; k <= kmax; ++k) {
        double ssr = dp[k][n - 1];
        if (!std::isfinite(ssr)) continue;
        int params = 2 * k + 1;
        double fit = std::log(std::max(ssr, 1e-12) / std::max(1, n - params));
        double crit = fit + params * 0.299 * std::pow(logn, 2.1) / n;
        if (crit < best_crit - 1e-12) {
            best_crit = crit;
            best_k = k;
        }
    }

    res.statistic = dp[best_k][n - 1];
    res.significant = best_k > 0;
    std::vector<int> starts;  // first index of each non-initial segment
    int j = n - 1;
    for (int k = best_k; k >= 1; --k) {
        int l = arg[k][j];
        starts.push_back(l + 1);
        j = l;
    }
    std::sort(starts.begin(), starts.end());
    for (int s : starts) res.break_dates.push_back(series.month_at(s));
    return res;
}

BreakResult pettitt_test(const ts::MonthlySeries& series, double level) {
    const auto& y = series.values;
    const int n = static_cast<int>(y.size());
    if (n < 10) throw std::length_error("pettitt_test: need at least 10 observations");

    // Midranks.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return y[a] < y[b]; });
    std::vector<double> rank(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && y[order[j + 1]] == y[order[i]]) ++j;
        double r = 0.5 * (i + j) + 1.0;
        for (int k = i; k <= j; ++k) rank[order[k]] = r;
        i = j + 1;
    }

    double cum = 0.0;
    double kmax = -1.0;
    int argmax = 0;
    for (int t = 0; t < n - 1; ++t) {
        cum += rank[t];
        double u = 2.0 * cum - static_cast<double>(t + 1) * (n + 1);
        if (std::fabs(u) > kmax) {
            kmax = std::fabs(u);
            argmax = t;
        }
    }

    BreakResult res;
    res.test = "pettitt";
    res.statistic = kmax;
    double nn = static_cast<double>(n);
    res.p_value = std::min(1.0, 2.0 * std::exp(-6.0 * kmax * kmax / (nn * nn * nn + nn * nn)));
    res.significant = res.p_value < level;
    // The split maximizing |U_t| ends the first regime at argmax; report the
    // first month of the second regime.
    res.break_dates.push_back(series.month_at(argmax + 1));
    return res;
}

BreakResult zivot_andrews(const ts::MonthlySeries& series, ZaModel model, int lags, double level) {
    const auto& y = series.values;
    const int n = static_cast<int>(y.size());
    if (n < 30) throw std::length_error("zivot_andrews: need at least 30 observations");
    if (lags < 0 || lags > n / 4) throw std::invalid_argument("zivot_andrews: bad lag count");

    // Rows: t = lags+2 .. n in 1-based terms of y. Regressors: intercept,
    // trend, break dummies, y_{t-1}, lagged differences.
    const int first_t = lags + 2;
    const int rows = n - first_t + 1;
    const int fixed_cols = 3 + lags;  // 1, t, y_{t-1}, dy lags
    const int dummy_cols = model == ZaModel::Both ? 2 : 1;
    const int k = fixed_cols + dummy_cols;
    if (rows <= k + 2) throw std::length_error("zivot_andrews: too few usable rows");

    std::vector<std::vector<double>> cols(fixed_cols, std::vector<double>(rows));
    std::vector<double> target(rows);
    for (int r = 0; r < rows; ++r) {
        int t = first_t + r;  // 1-based observation index
        cols[0][r] = 1.0;
        cols[1][r] = static_cast<double>(t);
        cols[2][r] = y[t - 2];  // y_{t-1}
        for (int l = 1; l <= lags; ++l) cols[2 + l][r] = y[t - 1 - l] - y[t - 2 - l];
        target[r] = y[t - 1] - y[t - 2];
    }
    const int alpha_col = 2;  // y_{t-1}

    // Suffix sums over rows ordered by t, so every dummy cross-product is
    // O(1) per candidate.
    auto suffix_of = [&](const std::vector<double>& v, bool weight_t) {
        std::vector<double> s(rows + 1, 0.0);
        for (int r = rows - 1; r >= 0; --r) {
            double w = weight_t ? cols[1][r] : 1.0;
            s[r] = s[r + 1] + w * v[r];
        }
        return s;
    };
    std::vector<std::vector<double>> suf(fixed_cols), suf_t(fixed_cols);
    for (int c = 0; c < fixed_cols; ++c) {
        suf[c] = suffix_of(cols[c], false);
        suf_t[c] = suffix_of(cols[c], true);
    }
    std::vector<double> suf_g = suffix_of(target, false);
    std::vector<double> suf_tg = suffix_of(target, true);
    std::vector<double> suf_tt = suffix_of(cols[1], true);  // sum of t^2

    // Fixed-block cross products.
    linalg::Mat base(fixed_cols, fixed_cols);
    std::vector<double> base_g(fixed_cols, 0.0);
    double gg = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int a = 0; a < fixed_cols; ++a) {
            base_g[a] += cols[a][r] * target[r];
            for (int b = a; b < fixed_cols; ++b) base(a, b) += cols[a][r] * cols[b][r];
        }
        gg += target[r] * target[r];
    }
    for (int a = 0; a < fixed_cols; ++a)
        for (int b = 0; b < a; ++b) base(a, b) = base(b, a);

    int lo = static_cast<int>(std::floor(0.15 * n));
    int hi = static_cast<int>(std::ceil(0.85 * n));
    lo = std::max(lo, 1);
    hi = std::min(hi, n - 2);

    BreakResult res;
    res.test = "zivot_andrews";
    res.p_value = -1.0;
    double min_t = std::numeric_limits<double>::infinity();
    int best_tb = -1;

    linalg::Mat xtx(k, k);
    std::vector<double> xty(k);
    for (int tb = lo; tb <= hi; ++tb) {
        // Row r corresponds to t = first_t + r; dummy active when t > tb.
        int r0 = std::max(0, tb + 1 - first_t);  // first active row
        if (r0 >= rows) continue;

        for (int a = 0; a < fixed_cols; ++a) {
            xty[a] = base_g[a];
            for (int b = 0; b < fixed_cols; ++b) xtx(a, b) = base(a, b);
        }
        // DU column.
        int du = fixed_cols;
        for (int a = 0; a < fixed_cols; ++a) {
            xtx(a, du) = xtx(du, a) = suf[a][r0];
        }
        xtx(du, du) = suf[0][r0];  // count of active rows
        xty[du] = suf_g[r0];
        if (model == ZaModel::Trend) {
            // Replace DU with DT = (t - tb) * 1(t > tb).
            for (int a = 0; a < fixed_cols; ++a)
                xtx(a, du) = xtx(du, a) = suf_t[a][r0] - tb * suf[a][r0];
            xtx(du, du) =
                suf_tt[r0] - 2.0 * tb * suf_t[0][r0] + static_cast<double>(tb) * tb * suf[0][r0];
            xty[du] = suf_tg[r0] - tb * suf_g[r0];
        } else if (model == ZaModel::Both) {
            int dt = fixed_cols + 1;
            for (int a = 0; a < fixed_cols; ++a)
                xtx(a, dt) = xtx(dt, a) = suf_t[a][r0] - tb * suf[a][r0];
            xtx(dt, dt) =
                suf_tt[r0] - 2.0 * tb * suf_t[0][r0] + static_cast<double>(tb) * tb * suf[0][r0];
            xty[dt] = suf_tg[r0] - tb * suf_g[r0];
            xtx(du, dt) = xtx(dt, du) = suf_t[0][r0] - tb * suf[0][r0];
        }

        // Solve for coefficients and the variance of alpha.
        linalg::Mat rhs(k, 2);
        for (int a = 0; a < k; ++a) {
            rhs(a, 0) = xty[a];
            rhs(a, 1) = a == alpha_col ? 1.0 : 0.0;
        }
        linalg::Mat sol;
        if (!linalg::solve_matrix(xtx, rhs, sol)) continue;
        double alpha = sol(alpha_col, 0);
        double btxty = 0.0;
        for (int a = 0; a < k; ++a) btxty += sol(a, 0) * xty[a];
        double ssr = gg - btxty;
        if (ssr <= 0.0) continue;
        double s2 = ssr / (rows - k);
        double var_alpha = s2 * sol(alpha_col, 1);
        if (var_alpha <= 0.0) continue;
        double tstat = alpha / std::sqrt(var_alpha);
        if (tstat < min_t) {
            min_t = tstat;
            best_tb = tb;
        }
    }
    if (best_tb < 0) throw std::runtime_error("zivot_andrews: all candidate regressions failed");

    res.statistic = min_t;
    res.break_dates.push_back(series.month_at(best_tb));
    double cv = za_critical_value(model, n, level);
    res.significant = min_t < cv;  // reject unit root
    res.note = "critical value " + std::to_string(cv);
    return res;
}

ts::MonthlySeries seasonally_adjust(const ts::MonthlySeries& series, YearMonth train_first,
                                    YearMonth train_last) {
    int i0 = series.index_of(train_first);
    int i1 = series.index_of(train_last);
    if (i0 < 0 || i1 < 0 || i1 < i0)
        throw std::out_of_range("seasonally_adjust: training window outside sample");
    int m = series.frequency;
    std::vector<double> mean(m, 0.0);
    std::vector<int> count(m, 0);
    for (int i = i0; i <= i1; ++i) {
        int mo = (series.start.index() + i) % m;
        mean[mo] += series.values[i];
        ++count[mo];
    }
    for (int j = 0; j < m; ++j)
        if (count[j]) mean[j] /= count[j];
    ts::MonthlySeries out = series;
    for (size_t i = 0; i < out.values.size(); ++i) {
        int mo = (series.start.index() + static_cast<int>(i)) % m;
        out.values[i] -= mean[mo];
    }
    return out;
}

std::vector<BatteryRow> run_battery(
    const std::vector<std::pair<std::string, ts::MonthlySeries>>& series_set,
    YearMonth chow_candidate, double level) {
    std::vector<BatteryRow> rows;
    for (const auto& [name, series] : series_set) {
        auto run = [&](const std::string& test, auto&& fn) {
            BatteryRow row;
            row.series_name = name;
            row.test = test;
            try {
                row.result = fn();
            } catch (const std::exception& e) {
                row.error = true;
                row.error_message = e.what();
            }
            rows.push_back(std::move(row));
        };
        run("cusum", [&] { return cusum_test(series, level); });
        run("chow", [&] { return chow_test(series, chow_candidate, level); });
        run("bai_perron", [&] { return bai_perron(series); });
        run("pettitt", [&] { return pettitt_test(series, level); });
        run("zivot_andrews", [&] { return zivot_andrews(series, ZaModel::Intercept, 0, level); });
    }
    return rows;
}

std::string battery_to_csv(const std::vector<BatteryRow>& rows) {
    std::ostringstream os;
    os << "series,test,statistic,break_date,p_or_decision,note\n";
    os.precision(10);
    for (const auto& r : rows) {
        os << r.series_name << ',' << r.test << ',';
        if (r.error) {
            os << ",,error," << r.error_message << '\n';
            continue;
        }
        os << r.result.statistic << ',';
        for (size_t i = 0; i < r.result.break_dates.size(); ++i) {
            if (i) os << ';';
            os << r.result.break_dates[i].str();
        }
        os << ',';
        if (r.result.p_value >= 0.0) os << r.result.p_value;
        else os << (r.result.significant ? "break" : "no_break");
        os << ',' << r.result.note << '\n';
    }
    return os.str();
}

}  // namespace firmtrack::breaks
