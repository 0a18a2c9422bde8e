#include "firmtrack/select/tests.hpp"

#include <cmath>
#include <stdexcept>

#include "firmtrack/core/linalg.hpp"
#include "firmtrack/core/stats.hpp"

namespace firmtrack::select {

namespace {

std::vector<double> detrend(std::span<const double> y, KpssTrend trend) {
    const int n = static_cast<int>(y.size());
    std::vector<double> e(n);
    if (trend == KpssTrend::Level) {
        double m = stats::mean(y);
        for (int t = 0; t < n; ++t) e[t] = y[t] - m;
        return e;
    }
    // OLS on (1, t).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int t = 0; t < n; ++t) {
        sx += t;
        sy += y[t];
        sxx += static_cast<double>(t) * t;
        sxy += t * y[t];
    }
    double denom = n * sxx - sx * sx;
    double b = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    double a = (sy - b * sx) / n;
    for (int t = 0; t < n; ++t) e[t] = y[t] - a - b * t;
    return e;
}

}  // namespace

UnitRootResult kpss_test(std::span<const double> y, KpssTrend trend, double level) {
    const int n = static_cast<int>(y.size());
    if (n < 12) throw std::length_error("kpss_test: need at least 12 observations");

    UnitRootResult res;
    res.level = level;
    res.critical_value = kpss_critical_value(trend, level);

    std::vector<double> e = detrend(y, trend);
    double ss = 0.0, scale = 0.0;
    for (double v : e) {
        ss += v * v;
        scale = std::max(scale, std::fabs(v));
    }
    if (scale < 1e-12 || ss <= 0.0) {
        res.statistic = 0.0;
        res.stationary = true;
        return res;
    }

    int lag = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25)));
    double lrv = ss / n;
    for (int j = 1; j <= lag; ++j) {
        double w = 1.0 - static_cast<double>(j) / (lag + 1);
        double g = 0.0;
        for (int t = j; t < n; ++t) g += e[t] * e[t - j];
        lrv += 2.0 * w * g / n;
    }
    if (lrv <= 0.0) lrv = ss / n;  // kernel produced a non-positive estimate

    double cum = 0.0, num = 0.0;
    for (int t = 0; t < n; ++t) {
        cum += e[t];
        num += cum * cum;
    }
    res.statistic = num / (static_cast<double>(n) * n * lrv);
    res.stationary = !(res.statistic > res.critical_value);
    return res;
}

int select_d(const ts::MonthlySeries& series, int max_d, KpssTrend trend, double level) {
    if (max_d <= 0) return 0;
    ts::MonthlySeries cur = series;
    for (int d = 0; d <= max_d; ++d) {
        if (cur.size() < 12) return d == 0 ? 0 : d;
        if (kpss_test(cur.values, trend, level).stationary) return d;
        if (d == max_d) break;
        cur = ts::difference(cur, 1, 0, cur.frequency);
    }
    return max_d;
}

SeasonalStabilityResult canova_hansen_test(std::span<const double> y, int period, double level) {
    const int n = static_cast<int>(y.size());
    if (period < 2) throw std::invalid_argument("canova_hansen_test: period must be >= 2");
    if (n < 2 * period) throw std::length_error("canova_hansen_test: need at least two seasons");

    SeasonalStabilityResult res;
    res.level = level;
    res.critical_value = ch_critical_value(period, level);

    const int s1 = period - 1;
    // OLS of y on intercept plus month dummies for the first s-1 months:
    // coefficient per month = month mean, so residuals are demeaned by month.
    std::vector<double> month_mean(period, 0.0);
    std::vector<int> month_count(period, 0);
    for (int t = 0; t < n; ++t) {
        month_mean[t % period] += y[t];
        ++month_count[t % period];
    }
    for (int m = 0; m < period; ++m) month_mean[m] /= month_count[m];

    std::vector<double> e(n);
    double scale = 0.0;
    for (int t = 0; t < n; ++t) {
        e[t] = y[t] - month_mean[t % period];
        scale = std::max(scale, std::fabs(e[t]));
    }
    if (scale < 1e-12) {
        res.statistic = 0.0;
        res.stable = true;
        return res;
    }

    int lag = static_cast<int>(std::lround(period * std::pow(n / 100.0, 0.25)));
    lag = std::min(lag, n - 1);

    // f_t = x_t * e_t has a single nonzero component (the month dummy), so
    // the long-run covariance accumulates scalar products into month cells.
    linalg::Mat omega(s1, s1);
    for (int t = 0; t < n; ++t) {
        int mt = t % period;
        if (mt < s1) omega(mt, mt) += e[t] * e[t];
    }
    for (int j = 1; j <= lag; ++j) {
        double w = 1.0 - static_cast<double>(j) / (lag + 1);
        for (int t = j; t < n; ++t) {
            int mt = t % period, ms = (t - j) % period;
            if (mt < s1 && ms < s1) {
                double v = w * e[t] * e[t - j];
                omega(mt, ms) += v;
                omega(ms, mt) += v;
            }
        }
    }
    for (int i = 0; i < s1; ++i)
        for (int j = 0; j < s1; ++j) omega(i, j) /= n;

    // G = sum_t F_t F_t' with F_t the running sums of f.
    std::vector<double> run(s1, 0.0);
    linalg::Mat g(s1, s1);
    for (int t = 0; t < n; ++t) {
        int mt = t % period;
        if (mt < s1) run[mt] += e[t];
        for (int i = 0; i < s1; ++i)
            for (int j = 0; j < s1; ++j) g(i, j) += run[i] * run[j];
    }

    linalg::Mat x;
    if (!linalg::solve_matrix(omega, g, x)) {
        // Near-singular long-run covariance (short samples); retry with a
        // small ridge before giving up.
        double trace = 0.0;
        for (int i = 0; i < s1; ++i) trace += std::fabs(omega(i, i));
        double ridge = std::max(1e-10 * trace / s1, 1e-300);
        linalg::Mat damped = omega;
        for (int i = 0; i < s1; ++i) damped(i, i) += ridge;
        if (!linalg::solve_matrix(damped, g, x))
            throw std::runtime_error("canova_hansen_test: singular long-run covariance");
    }
    double tr = 0.0;
    for (int i = 0; i < s1; ++i) tr += x(i, i);
    res.statistic = tr / (static_cast<double>(n) * n);
    res.stable = !(res.statistic > res.critical_value);
    return res;
}

int select_D(const ts::MonthlySeries& series, int period, int max_D, double level) {
    if (period <= 1 || max_D <= 0) return 0;
    if (static_cast<int>(series.size()) < 2 * period) return 0;
    try {
        auto res = canova_hansen_test(series.values, period, level);
        return res.stable ? 0 : std::min(1, max_D);
    } catch (const std::exception&) {
        return 0;  // sample too degenerate to establish instability
    }
}

}  // namespace firmtrack::select
