#pragma once

// Independent reference implementations used as test oracles. Each one is
// deliberately naive: straight from the definitions, no shared code with
// the library paths it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "firmtrack/status/status.hpp"

namespace oracles {

/// Full-matrix Levenshtein dynamic program.
inline int levenshtein_dp(std::string_view a, std::string_view b) {
    const size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
    for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
    for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= m; ++j) {
            int cost = a[i - 1] == b[j - 1] ? 0 : 1;
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
        }
    }
    return d[n][m];
}

/// Rule-by-rule event classification over a whole status sequence,
/// month 1 = window start. Applies the lifecycle rules directly on the
/// sequence rather than via an incremental machine:
///   - a firm on the register in month 1 is pre-existing (no event);
///   - Opened at the first month the firm is present, when that status is
///     Active and the month is not the window start;
///   - a first appearance with a closed-like status enters silently;
///   - Closed at the first month of each open->closed transition, where
///     "closed" covers both a closed-like status and absence after
///     presence (inferred dissolution);
///   - Reopened at each closed->open transition after first presence;
///   - NoChange when open in both adjacent months;
///   - persisting closed states emit nothing.
using Status = firmtrack::status::StatusClass;
using EventType = firmtrack::status::FirmEventType;

struct OracleEvent {
    int month_index;  // 0-based within the sequence
    EventType event;
};

inline std::vector<OracleEvent> classify_sequence(const std::vector<Status>& seq) {
    std::vector<OracleEvent> events;
    const int n = static_cast<int>(seq.size());

    int first_present = -1;
    for (int t = 0; t < n; ++t) {
        if (seq[t] != Status::Absent) {
            first_present = t;
            break;
        }
    }
    if (first_present < 0) return events;

    // "Open" state per month from first presence: Active=open, anything
    // else (closed-like status, or absent after presence) = closed.
    auto open_at = [&](int t) { return seq[t] == Status::Active; };

    if (first_present > 0 && open_at(first_present))
        events.push_back({first_present, EventType::Opened});

    for (int t = first_present + 1; t < n; ++t) {
        bool prev_open = open_at(t - 1);
        bool cur_open = open_at(t);
        if (prev_open && !cur_open) events.push_back({t, EventType::Closed});
        else if (!prev_open && cur_open) events.push_back({t, EventType::Reopened});
        else if (prev_open && cur_open) events.push_back({t, EventType::NoChange});
    }

    // The Opened month must not double-report: the transition loop starts
    // after first_present, so no duplicate is possible by construction.
    return events;
}

/// Pettitt statistic by the double-loop sign definition.
inline std::pair<double, int> pettitt_bruteforce(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    double best = -1.0;
    int arg = 0;
    for (int t = 0; t < n - 1; ++t) {
        double u = 0.0;
        for (int i = 0; i <= t; ++i) {
            for (int j = t + 1; j < n; ++j) {
                double d = x[i] - x[j];
                u += d > 0 ? 1.0 : d < 0 ? -1.0 : 0.0;
            }
        }
        if (std::fabs(u) > best) {
            best = std::fabs(u);
            arg = t;
        }
    }
    return {best, arg};
}

/// Exhaustive mean-shift segmentation: minimal SSR over all placements of
/// `breaks` boundaries with segments of at least `min_len`.
struct Segmentation {
    double ssr = 0.0;
    std::vector<int> starts;  // first index of each non-initial segment
};

inline double segment_ssr(const std::vector<double>& y, int i, int j) {
    double s = 0.0, ss = 0.0;
    for (int k = i; k <= j; ++k) {
        s += y[k];
        ss += y[k] * y[k];
    }
    int len = j - i + 1;
    return ss - s * s / len;
}

inline Segmentation best_segmentation_exhaustive(const std::vector<double>& y, int breaks,
                                                 int min_len) {
    const int n = static_cast<int>(y.size());
    Segmentation best;
    best.ssr = std::numeric_limits<double>::infinity();
    if (breaks == 0) {
        best.ssr = segment_ssr(y, 0, n - 1);
        return best;
    }
    if (breaks == 1) {
        for (int b = min_len; b + min_len <= n; ++b) {
            double ssr = segment_ssr(y, 0, b - 1) + segment_ssr(y, b, n - 1);
            if (ssr < best.ssr) {
                best.ssr = ssr;
                best.starts = {b};
            }
        }
        return best;
    }
    if (breaks == 2) {
        for (int b1 = min_len; b1 + 2 * min_len <= n; ++b1) {
            double left = segment_ssr(y, 0, b1 - 1);
            for (int b2 = b1 + min_len; b2 + min_len <= n; ++b2) {
                double ssr = left + segment_ssr(y, b1, b2 - 1) + segment_ssr(y, b2, n - 1);
                if (ssr < best.ssr) {
                    best.ssr = ssr;
                    best.starts = {b1, b2};
                }
            }
        }
        return best;
    }
    return best;  // only 0..2 breaks needed by the tests
}

/// Yule-Walker estimate of an AR(1) coefficient.
inline double yule_walker_ar1(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double c0 = 0.0, c1 = 0.0;
    for (int t = 0; t < n; ++t) {
        double d = y[t] - mean;
        c0 += d * d;
        if (t > 0) c1 += d * (y[t - 1] - mean);
    }
    return c1 / c0;
}

/// Innovations-algorithm estimate of an MA(1) coefficient from sample
/// autocovariances (Brockwell-Davis style, fixed small iteration count).
inline double innovations_ma1(const std::vector<double>& y, int m = 20) {
    const int n = static_cast<int>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    std::vector<double> gamma(m + 1, 0.0);
    for (int h = 0; h <= m; ++h) {
        for (int t = 0; t + h < n; ++t) gamma[h] += (y[t] - mean) * (y[t + h] - mean);
        gamma[h] /= n;
    }
    std::vector<std::vector<double>> theta(m + 1, std::vector<double>(m + 1, 0.0));
    std::vector<double> v(m + 1, 0.0);
    v[0] = gamma[0];
    for (int k = 1; k <= m; ++k) {
        for (int j = 0; j < k; ++j) {
            double s = gamma[k - j];
            for (int i = 0; i < j; ++i) s -= theta[j][j - i] * theta[k][k - i] * v[i];
            theta[k][k - j] = s / v[j];
        }
        v[k] = gamma[0];
        for (int j = 0; j < k; ++j) v[k] -= theta[k][k - j] * theta[k][k - j] * v[j];
    }
    return theta[m][1];
}

}  // namespace oracles
