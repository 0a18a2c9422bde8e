#include "firmtrack/ts/sarima.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "firmtrack/core/linalg.hpp"
#include "firmtrack/core/optim.hpp"
#include "firmtrack/core/stats.hpp"

namespace firmtrack::ts {

namespace {

constexpr double kBig = 1e30;
constexpr double kLog2Pi = 1.8378770664093453;

double clamp_pacf(double r) {
    const double lim = 1.0 - 1e-12;
    return std::clamp(r, -lim, lim);
}

/// Polynomial product; inputs/outputs are coefficient vectors in the lag
/// operator with index = power of B.
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> ar_to_poly(const std::vector<double>& coeffs) {
    std::vector<double> poly(coeffs.size() + 1, 0.0);
    poly[0] = 1.0;
    for (size_t i = 0; i < coeffs.size(); ++i) poly[i + 1] = -coeffs[i];
    return poly;
}

std::vector<double> seasonal_poly(const std::vector<double>& coeffs, int period, double sign) {
    std::vector<double> poly(coeffs.size() * period + 1, 0.0);
    poly[0] = 1.0;
    for (size_t i = 0; i < coeffs.size(); ++i) poly[(i + 1) * period] = sign * coeffs[i];
    return poly;
}

/// State-space filter for a zero-mean ARMA process in Harvey's companion
/// form. The transition matrix is touched only through its structure, so
/// a filter step costs O(r^2).
class ArmaKalman {
public:
    ArmaKalman(const std::vector<double>& ar, const std::vector<double>& ma) {
        r_ = std::max(static_cast<int>(ar.size()), static_cast<int>(ma.size()) + 1);
        r_ = std::max(r_, 1);
        phi_.assign(r_, 0.0);
        std::copy(ar.begin(), ar.end(), phi_.begin());
        rvec_.assign(r_, 0.0);
        rvec_[0] = 1.0;
        std::copy(ma.begin(), ma.end(), rvec_.begin() + 1);
    }

    struct Result {
        bool ok = false;
        double sum_log_f = 0.0;
        double ssq = 0.0;  // sum of v^2 / F
        std::vector<double> scaled_residuals;
        std::vector<double> final_state;  // a_{n+1}
    };

    Result filter(const std::vector<double>& z) const {
        Result res;
        const int n = static_cast<int>(z.size());
        std::vector<double> p;
        if (!initial_covariance(p)) return res;

        std::vector<double> a(r_, 0.0), k(r_, 0.0), ta(r_, 0.0), q1(r_ * r_), q2(r_ * r_);
        res.scaled_residuals.resize(n);
        double f = 0.0;
        bool steady = false;
        for (int t = 0; t < n; ++t) {
            if (!steady) f = p[0];
            if (!(f > 0.0) || !std::isfinite(f)) return res;
            double v = z[t] - a[0];
            res.sum_log_f += std::log(f);
            res.ssq += v * v / f;
            res.scaled_residuals[t] = v / std::sqrt(f);

            if (!steady) {
                // K = T P e1
                for (int i = 0; i < r_; ++i)
                    k[i] = phi_[i] * p[0] + (i + 1 < r_ ? p[idx(i + 1, 0)] : 0.0);
            }
            // a <- T a + K v / F
            double a0 = a[0];
            for (int i = 0; i < r_; ++i) ta[i] = phi_[i] * a0 + (i + 1 < r_ ? a[i + 1] : 0.0);
            for (int i = 0; i < r_; ++i) a[i] = ta[i] + k[i] * v / f;

            if (!steady) {
                // P <- T P T' + R R' - K K' / F
                for (int i = 0; i < r_; ++i)
                    for (int j = 0; j < r_; ++j)
                        q1[idx(i, j)] = phi_[i] * p[idx(0, j)] + (i + 1 < r_ ? p[idx(i + 1, j)] : 0.0);
                for (int i = 0; i < r_; ++i)
                    for (int j = 0; j < r_; ++j)
                        q2[idx(i, j)] = phi_[j] * q1[idx(i, 0)] + (j + 1 < r_ ? q1[idx(i, j + 1)] : 0.0);
                double delta = 0.0, scale = 0.0;
                for (int i = 0; i < r_; ++i) {
                    for (int j = 0; j < r_; ++j) {
                        double val = q2[idx(i, j)] + rvec_[i] * rvec_[j] - k[i] * k[j] / f;
                        delta = std::max(delta, std::fabs(val - p[idx(i, j)]));
                        scale = std::max(scale, std::fabs(val));
                        q1[idx(i, j)] = val;  // q1 now holds the new P
                    }
                }
                // enforce symmetry against roundoff drift
                for (int i = 0; i < r_; ++i)
                    for (int j = i + 1; j < r_; ++j) {
                        double s = 0.5 * (q1[idx(i, j)] + q1[idx(j, i)]);
                        q1[idx(i, j)] = q1[idx(j, i)] = s;
                    }
                p.swap(q1);
                if (delta < 1e-13 * (1.0 + scale)) steady = true;
            }
        }
        res.final_state = std::move(a);
        res.ok = true;
        return res;
    }

    int order() const { return r_; }

private:
    int idx(int i, int j) const { return i * r_ + j; }

    /// Stationary covariance by the doubling iteration
    /// P = sum_j T^j R R' T'^j.
    bool initial_covariance(std::vector<double>& p) const {
        linalg::Mat a(r_, r_);
        for (int i = 0; i < r_; ++i) {
            a(i, 0) = phi_[i];
            if (i + 1 < r_) a(i, i + 1) = 1.0;
        }
        linalg::Mat acc(r_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) acc(i, j) = rvec_[i] * rvec_[j];

        for (int iter = 0; iter < 80; ++iter) {
            linalg::Mat ap = linalg::matmul(a, acc);
            linalg::Mat apa = linalg::matmul_transposed(ap, a);
            double add = 0.0, base = 0.0;
            for (int i = 0; i < r_ * r_; ++i) {
                acc.a[i] += apa.a[i];
                add = std::max(add, std::fabs(apa.a[i]));
                base = std::max(base, std::fabs(acc.a[i]));
                if (!std::isfinite(acc.a[i])) return false;
            }
            if (add < 1e-16 * (1.0 + base)) break;
            a = linalg::matmul(a, a);
            for (double v : a.a)
                if (!std::isfinite(v)) return false;
        }
        p = std::move(acc.a);
        return true;
    }

    int r_ = 1;
    std::vector<double> phi_;   // first column of T, zero padded
    std::vector<double> rvec_;  // (1, theta...) zero padded
};

struct ExpandedModel {
    std::vector<double> ar;  // full AR coefficients of the differenced process
    std::vector<double> ma;  // full MA coefficients
};

ExpandedModel expand(const SarimaParams& params, int period) {
    ExpandedModel m;
    m.ar = detail::expand_product_ar(params.phi, params.seasonal_phi, period);
    m.ma = detail::expand_product_ma(params.theta, params.seasonal_theta, period);
    return m;
}

struct LikelihoodResult {
    bool ok = false;
    double loglik = 0.0;
    double sigma2 = 0.0;
    std::vector<double> residuals;
    std::vector<double> final_state;
};

/// Concentrated Gaussian likelihood of the demeaned differenced series.
LikelihoodResult concentrated_likelihood(const std::vector<double>& w, double mean,
                                         const ExpandedModel& model) {
    LikelihoodResult out;
    std::vector<double> z(w.size());
    for (size_t i = 0; i < w.size(); ++i) z[i] = w[i] - mean;
    ArmaKalman kalman(model.ar, model.ma);
    auto fr = kalman.filter(z);
    if (!fr.ok) return out;
    const double n = static_cast<double>(w.size());
    double sigma2 = fr.ssq / n;
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return out;
    out.loglik = -0.5 * n * (kLog2Pi + 1.0 + std::log(sigma2)) - 0.5 * fr.sum_log_f;
    if (!std::isfinite(out.loglik)) return out;
    out.sigma2 = sigma2;
    out.residuals = std::move(fr.scaled_residuals);
    out.final_state = std::move(fr.final_state);
    out.ok = true;
    return out;
}

struct ParamLayout {
    const SarimaSpec& spec;
    explicit ParamLayout(const SarimaSpec& s) : spec(s) {}
    int size() const { return spec.p + spec.q + spec.P + spec.Q + (spec.with_constant ? 1 : 0); }

    SarimaParams unpack(const std::vector<double>& u) const {
        SarimaParams params;
        int at = 0;
        auto take_ar = [&](int count) {
            std::vector<double> pacf(count);
            for (int i = 0; i < count; ++i) pacf[i] = clamp_pacf(std::tanh(u[at++]));
            return detail::pacf_to_ar(pacf);
        };
        auto take_ma = [&](int count) {
            std::vector<double> a = take_ar(count);
            for (double& v : a) v = -v;
            return a;
        };
        params.phi = take_ar(spec.p);
        params.theta = take_ma(spec.q);
        params.seasonal_phi = take_ar(spec.P);
        params.seasonal_theta = take_ma(spec.Q);
        params.mean = spec.with_constant ? u[at++] : 0.0;
        return params;
    }
};

double polynomial_at_one(const std::vector<double>& coeffs) {
    double s = 1.0;
    for (double c : coeffs) s -= c;
    return s;
}

}  // namespace

int SarimaSpec::min_observations() const {
    int arma = std::max(p + P * period, q + Q * period);
    return d + D * period + arma + 1 + (with_constant ? 1 : 0);
}

std::string SarimaSpec::str() const {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "(%d,%d,%d)(%d,%d,%d)[%d]%s", p, d, q, P, D, Q, period,
                  with_constant ? "+c" : "");
    return buf;
}

namespace detail {

std::vector<double> pacf_to_ar(const std::vector<double>& pacf) {
    std::vector<double> a(pacf.size(), 0.0), prev;
    for (size_t k = 0; k < pacf.size(); ++k) {
        prev.assign(a.begin(), a.begin() + k);
        a[k] = pacf[k];
        for (size_t i = 0; i < k; ++i) a[i] = prev[i] - pacf[k] * prev[k - 1 - i];
    }
    return a;
}

std::vector<double> ar_to_pacf(const std::vector<double>& ar) {
    std::vector<double> a = ar, pacf(ar.size());
    for (int k = static_cast<int>(ar.size()) - 1; k >= 0; --k) {
        double rk = a[k];
        pacf[k] = rk;
        double denom = 1.0 - rk * rk;
        if (std::fabs(denom) < 1e-15) {
            // boundary; the remaining levels are not recoverable
            for (int i = 0; i < k; ++i) pacf[i] = std::numeric_limits<double>::quiet_NaN();
            break;
        }
        std::vector<double> prev(k);
        for (int i = 0; i < k; ++i) prev[i] = (a[i] + rk * a[k - 1 - i]) / denom;
        std::copy(prev.begin(), prev.end(), a.begin());
    }
    return pacf;
}

bool is_stationary(const std::vector<double>& ar) {
    for (double r : ar_to_pacf(ar)) {
        if (!std::isfinite(r) || std::fabs(r) >= 1.0) return false;
    }
    return true;
}

std::vector<double> expand_product_ar(const std::vector<double>& phi,
                                      const std::vector<double>& seasonal_phi, int period) {
    auto poly = poly_mul(ar_to_poly(phi), seasonal_poly(seasonal_phi, period, -1.0));
    std::vector<double> out(poly.size() - 1);
    for (size_t i = 1; i < poly.size(); ++i) out[i - 1] = -poly[i];
    return out;
}

std::vector<double> expand_product_ma(const std::vector<double>& theta,
                                      const std::vector<double>& seasonal_theta, int period) {
    std::vector<double> base(theta.size() + 1, 0.0);
    base[0] = 1.0;
    for (size_t i = 0; i < theta.size(); ++i) base[i + 1] = theta[i];
    auto poly = poly_mul(base, seasonal_poly(seasonal_theta, period, 1.0));
    std::vector<double> out(poly.size() - 1);
    for (size_t i = 1; i < poly.size(); ++i) out[i - 1] = poly[i];
    return out;
}

std::vector<double> psi_weights(const std::vector<double>& full_ar,
                                const std::vector<double>& full_ma, int count) {
    std::vector<double> psi(count, 0.0);
    for (int j = 1; j <= count; ++j) {
        double v = j <= static_cast<int>(full_ma.size()) ? full_ma[j - 1] : 0.0;
        int limit = std::min<int>(j, static_cast<int>(full_ar.size()));
        for (int i = 1; i <= limit; ++i) {
            double prev = (j - i == 0) ? 1.0 : psi[j - i - 1];
            v += full_ar[i - 1] * prev;
        }
        psi[j - 1] = v;
    }
    psi.insert(psi.begin(), 1.0);
    psi.pop_back();
    return psi;
}

}  // namespace detail

double aicc_value(double log_likelihood, int k, int n) {
    if (n <= k + 1) return std::numeric_limits<double>::infinity();
    double aic = -2.0 * log_likelihood + 2.0 * k;
    return aic + 2.0 * static_cast<double>(k) * (k + 1) / (n - k - 1);
}

double Forecast::error_covariance(int i, int j) const {
    if (i < 1 || j < 1 || i > horizon() || j > horizon())
        throw std::out_of_range("error_covariance: horizon out of range");
    double s = 0.0;
    int lim = std::min(i, j);
    for (int u = 1; u <= lim; ++u) s += psi[i - u] * psi[j - u];
    return sigma2 * s;
}

FittedSarima fit(const MonthlySeries& series, const SarimaSpec& spec, const FitOptions& opts) {
    if (spec.p < 0 || spec.q < 0 || spec.P < 0 || spec.Q < 0 || spec.d < 0 || spec.D < 0 ||
        spec.period < 1)
        throw std::invalid_argument("fit: negative order");
    if (static_cast<int>(series.size()) < spec.min_observations())
        throw std::length_error("fit: series too short for " + spec.str());

    MonthlySeries diffed = difference(series, spec.d, spec.D, spec.period);
    const std::vector<double>& w = diffed.values;
    const int n = static_cast<int>(w.size());

    ParamLayout layout(spec);
    std::vector<double> x0(layout.size(), 0.0);
    if (spec.with_constant) x0.back() = stats::mean(w);

    auto objective = [&](const std::vector<double>& u) -> double {
        SarimaParams params = layout.unpack(u);
        auto lik = concentrated_likelihood(w, params.mean, expand(params, spec.period));
        return lik.ok ? -lik.loglik : kBig;
    };

    optim::Options oopts;
    oopts.max_evaluations = opts.max_evaluations;
    oopts.rel_tolerance = opts.rel_tolerance;
    oopts.initial_step = 0.1;
    optim::Result best = optim::minimize(objective, x0, oopts);

    FittedSarima out;
    out.spec = spec;
    out.params = layout.unpack(best.x);
    out.training = series;
    out.n_effective = n;
    out.evaluations = best.evaluations;

    auto lik = concentrated_likelihood(w, out.params.mean, expand(out.params, spec.period));
    if (!lik.ok || !(lik.sigma2 > 0.0))
        throw std::runtime_error("fit: degenerate innovation variance for " + spec.str());
    out.params.sigma2 = lik.sigma2;
    out.sigma2 = lik.sigma2;
    out.log_likelihood = lik.loglik;
    out.residuals = std::move(lik.residuals);
    out.aicc = aicc_value(out.log_likelihood, spec.criterion_param_count(), n);
    out.constant = out.params.mean * polynomial_at_one(out.params.phi) *
                   polynomial_at_one(out.params.seasonal_phi);
    out.converged = best.converged && best.value < kBig;
    return out;
}

FittedSarima FittedSarima::from_parameters(const SarimaSpec& spec, const SarimaParams& params,
                                           const MonthlySeries& training) {
    if (!detail::is_stationary(params.phi) || !detail::is_stationary(params.seasonal_phi))
        throw std::invalid_argument("from_parameters: non-stationary AR part");
    {
        std::vector<double> neg = params.theta;
        for (double& v : neg) v = -v;
        std::vector<double> sneg = params.seasonal_theta;
        for (double& v : sneg) v = -v;
        if (!detail::is_stationary(neg) || !detail::is_stationary(sneg))
            throw std::invalid_argument("from_parameters: non-invertible MA part");
    }
    FittedSarima out;
    out.spec = spec;
    out.params = params;
    out.training = training;

    MonthlySeries diffed = difference(training, spec.d, spec.D, spec.period);
    const int n = static_cast<int>(diffed.size());
    out.n_effective = n;

    std::vector<double> z(diffed.values);
    for (double& v : z) v -= params.mean;
    ExpandedModel model = expand(params, spec.period);
    ArmaKalman kalman(model.ar, model.ma);
    auto fr = kalman.filter(z);
    if (!fr.ok) throw std::runtime_error("from_parameters: filter failed");
    double sigma2 = params.sigma2 > 0.0 ? params.sigma2 : fr.ssq / n;
    out.params.sigma2 = sigma2;
    out.sigma2 = sigma2;
    out.log_likelihood =
        -0.5 * n * (kLog2Pi + std::log(sigma2)) - 0.5 * fr.sum_log_f - 0.5 * fr.ssq / sigma2;
    out.residuals = std::move(fr.scaled_residuals);
    out.aicc = aicc_value(out.log_likelihood, spec.criterion_param_count(), n);
    out.constant = params.mean * polynomial_at_one(params.phi) *
                   polynomial_at_one(params.seasonal_phi);
    out.converged = true;
    return out;
}

Forecast forecast(const FittedSarima& fit, int horizon, const std::vector<int>& levels) {
    if (horizon <= 0) throw std::invalid_argument("forecast: horizon must be positive");
    const SarimaSpec& spec = fit.spec;

    // Differencing stages, kept so the point forecasts can be integrated
    // back to the observed scale. Seasonal differences applied first.
    std::vector<std::vector<double>> stages;
    stages.push_back(fit.training.values);
    for (int k = 0; k < spec.D; ++k) {
        const auto& prev = stages.back();
        std::vector<double> next(prev.size() - spec.period);
        for (size_t i = spec.period; i < prev.size(); ++i)
            next[i - spec.period] = prev[i] - prev[i - spec.period];
        stages.push_back(std::move(next));
    }
    for (int k = 0; k < spec.d; ++k) {
        const auto& prev = stages.back();
        std::vector<double> next(prev.size() - 1);
        for (size_t i = 1; i < prev.size(); ++i) next[i - 1] = prev[i] - prev[i - 1];
        stages.push_back(std::move(next));
    }

    std::vector<double> z = stages.back();
    for (double& v : z) v -= fit.params.mean;

    ExpandedModel model = expand(fit.params, spec.period);
    ArmaKalman kalman(model.ar, model.ma);
    auto fr = kalman.filter(z);
    if (!fr.ok) throw std::runtime_error("forecast: filter failed");

    // Point forecasts of the differenced process.
    const int r = kalman.order();
    std::vector<double> padded_ar(r, 0.0);
    std::copy(model.ar.begin(), model.ar.end(), padded_ar.begin());
    std::vector<double> state = fr.final_state;
    std::vector<double> diff_forecast(horizon);
    for (int h = 0; h < horizon; ++h) {
        diff_forecast[h] = state[0] + fit.params.mean;
        std::vector<double> next(r, 0.0);
        for (int i = 0; i < r; ++i)
            next[i] = padded_ar[i] * state[0] + (i + 1 < r ? state[i + 1] : 0.0);
        state = std::move(next);
    }

    // Integrate back through the differencing stages (ordinary first,
    // they were applied last).
    std::vector<double> f = std::move(diff_forecast);
    int stage_idx = static_cast<int>(stages.size()) - 2;
    for (int k = 0; k < spec.d; ++k, --stage_idx) {
        const auto& hist = stages[stage_idx];
        for (int h = 0; h < horizon; ++h) f[h] += (h == 0) ? hist.back() : f[h - 1];
    }
    for (int k = 0; k < spec.D; ++k, --stage_idx) {
        const auto& hist = stages[stage_idx];
        int m = spec.period;
        for (int h = 0; h < horizon; ++h) {
            double past = (h < m) ? hist[hist.size() - m + h] : f[h - m];
            f[h] += past;
        }
    }

    // MA(infinity) weights of the observed process: differencing folded
    // into the AR polynomial.
    std::vector<double> poly = ar_to_poly(model.ar);
    for (int k = 0; k < spec.d; ++k) poly = poly_mul(poly, {1.0, -1.0});
    for (int k = 0; k < spec.D; ++k) {
        std::vector<double> sd(spec.period + 1, 0.0);
        sd[0] = 1.0;
        sd[spec.period] = -1.0;
        poly = poly_mul(poly, sd);
    }
    std::vector<double> full_ar(poly.size() - 1);
    for (size_t i = 1; i < poly.size(); ++i) full_ar[i - 1] = -poly[i];

    Forecast out;
    out.start = fit.training.last_month().plus_months(1);
    out.point = std::move(f);
    out.levels = levels;
    out.sigma2 = fit.sigma2;
    out.psi = detail::psi_weights(full_ar, model.ma, horizon);
    out.variance.resize(horizon);
    double acc = 0.0;
    for (int h = 0; h < horizon; ++h) {
        acc += out.psi[h] * out.psi[h];
        out.variance[h] = fit.sigma2 * acc;
    }
    out.lower.resize(levels.size());
    out.upper.resize(levels.size());
    for (size_t li = 0; li < levels.size(); ++li) {
        double zq = stats::normal_quantile(0.5 + levels[li] / 200.0);
        out.lower[li].resize(horizon);
        out.upper[li].resize(horizon);
        for (int h = 0; h < horizon; ++h) {
            double half = zq * std::sqrt(out.variance[h]);
            out.lower[li][h] = out.point[h] - half;
            out.upper[li][h] = out.point[h] + half;
        }
    }
    return out;
}

MonthlySeries simulate(const SarimaSpec& spec, const SarimaParams& params, int n, uint64_t seed,
                       YearMonth start) {
    if (n <= 0) throw std::invalid_argument("simulate: n must be positive");
    if (!detail::is_stationary(params.phi) || !detail::is_stationary(params.seasonal_phi))
        throw std::invalid_argument("simulate: explosive AR parameters rejected");
    {
        std::vector<double> neg = params.theta;
        for (double& v : neg) v = -v;
        std::vector<double> sneg = params.seasonal_theta;
        for (double& v : sneg) v = -v;
        if (!detail::is_stationary(neg) || !detail::is_stationary(sneg))
            throw std::invalid_argument("simulate: non-invertible MA parameters rejected");
    }

    ExpandedModel model = expand(params, spec.period);
    const int pa = static_cast<int>(model.ar.size());
    const int qa = static_cast<int>(model.ma.size());
    const int burn = 10 * (spec.p + spec.q + (spec.P + spec.Q) * spec.period) + 100;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(std::max(0.0, params.sigma2));

    const int total = burn + n;
    std::vector<double> eps(total), zv(total);
    for (int t = 0; t < total; ++t) eps[t] = sd * normal(rng);
    for (int t = 0; t < total; ++t) {
        double v = eps[t];
        for (int i = 1; i <= std::min(pa, t); ++i) v += model.ar[i - 1] * zv[t - i];
        for (int j = 1; j <= std::min(qa, t); ++j) v += model.ma[j - 1] * eps[t - j];
        zv[t] = v;
    }

    std::vector<double> w(zv.begin() + burn, zv.end());
    for (double& v : w) v += params.mean;

    // Integrate: ordinary sums first (inverse of the last difference
    // applied), then seasonal sums, all seeded with zero initial values.
    for (int k = 0; k < spec.d; ++k) {
        for (size_t i = 1; i < w.size(); ++i) w[i] += w[i - 1];
    }
    for (int k = 0; k < spec.D; ++k) {
        for (size_t i = spec.period; i < w.size(); ++i) w[i] += w[i - spec.period];
    }

    MonthlySeries out;
    out.start = start;
    out.frequency = spec.period > 1 ? spec.period : 12;
    out.values = std::move(w);
    return out;
}

std::string FittedSarima::dump() const {
    std::ostringstream os;
    os.precision(17);
    os << "spec " << spec.p << ' ' << spec.d << ' ' << spec.q << ' ' << spec.P << ' ' << spec.D
       << ' ' << spec.Q << ' ' << spec.period << ' ' << (spec.with_constant ? 1 : 0) << '\n';
    auto line = [&](const char* name, const std::vector<double>& v) {
        os << name;
        for (double x : v) os << ' ' << x;
        os << '\n';
    };
    line("phi", params.phi);
    line("theta", params.theta);
    line("seasonal_phi", params.seasonal_phi);
    line("seasonal_theta", params.seasonal_theta);
    os << "mean " << params.mean << '\n';
    os << "sigma2 " << sigma2 << '\n';
    os << "loglik " << log_likelihood << '\n';
    os << "aicc " << aicc << '\n';
    os << "converged " << (converged ? 1 : 0) << '\n';
    return os.str();
}

FittedSarima FittedSarima::parse_dump(const std::string& text, const MonthlySeries& training) {
    std::istringstream is(text);
    std::string key;
    SarimaSpec spec;
    SarimaParams params;
    bool have_spec = false;
    double sigma2 = 0.0;
    while (is >> key) {
        if (key == "spec") {
            int c = 0;
            is >> spec.p >> spec.d >> spec.q >> spec.P >> spec.D >> spec.Q >> spec.period >> c;
            spec.with_constant = c != 0;
            have_spec = true;
        } else if (key == "phi" || key == "theta" || key == "seasonal_phi" ||
                   key == "seasonal_theta") {
            int count = key == "phi"              ? spec.p
                        : key == "theta"          ? spec.q
                        : key == "seasonal_phi"   ? spec.P
                                                  : spec.Q;
            std::vector<double> v(count);
            for (double& x : v) is >> x;
            if (key == "phi") params.phi = v;
            else if (key == "theta") params.theta = v;
            else if (key == "seasonal_phi") params.seasonal_phi = v;
            else params.seasonal_theta = v;
        } else if (key == "mean") {
            is >> params.mean;
        } else if (key == "sigma2") {
            is >> sigma2;
        } else {
            std::string rest;
            std::getline(is, rest);
        }
    }
    if (!have_spec) throw std::runtime_error("parse_dump: missing spec line");
    params.sigma2 = sigma2;
    return FittedSarima::from_parameters(spec, params, training);
}

}  // namespace firmtrack::ts
