#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "firmtrack/ts/series.hpp"

namespace firmtrack::ts {

/// Order specification of a seasonal ARIMA process
/// (p,d,q)(P,D,Q)[period], optionally with a constant term.
struct SarimaSpec {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int period = 1;
    bool with_constant = false;

    /// Free parameters excluding the innovation variance.
    int arma_param_count() const { return p + q + P + Q + (with_constant ? 1 : 0); }
    /// Parameters counted by information criteria (variance included).
    int criterion_param_count() const { return arma_param_count() + 1; }
    /// Minimum observations before differencing that the fitter accepts.
    int min_observations() const;

    std::string str() const;

    friend bool operator==(const SarimaSpec&, const SarimaSpec&) = default;
};

struct SarimaParams {
    std::vector<double> phi;             // non-seasonal AR
    std::vector<double> theta;           // non-seasonal MA
    std::vector<double> seasonal_phi;    // seasonal AR
    std::vector<double> seasonal_theta;  // seasonal MA
    double mean = 0.0;                   // mean of the differenced series
    double sigma2 = 1.0;
};

/// Point forecasts with symmetric Gaussian intervals. `psi` holds the
/// moving-average representation weights of the observed (undifferenced)
/// process, which determine the full forecast-error covariance across
/// horizons.
struct Forecast {
    YearMonth start;  // first forecast month
    std::vector<double> point;
    std::vector<int> levels;
    std::vector<std::vector<double>> lower;  // [level][horizon]
    std::vector<std::vector<double>> upper;
    std::vector<double> variance;  // per-horizon forecast error variance
    std::vector<double> psi;
    double sigma2 = 0.0;

    int horizon() const { return static_cast<int>(point.size()); }

    /// Cov(e_i, e_j) between forecast errors at 1-based horizons i and j.
    double error_covariance(int i, int j) const;
};

struct FittedSarima {
    SarimaSpec spec;
    SarimaParams params;
    double constant = 0.0;  // c in the difference-equation form
    double sigma2 = 0.0;
    double log_likelihood = 0.0;
    double aicc = 0.0;
    std::vector<double> residuals;  // one-step errors scaled to variance sigma2
    bool converged = false;
    int evaluations = 0;
    int n_effective = 0;  // usable observations after differencing
    MonthlySeries training;

    /// Builds a fitted model from known parameters, running the filter once
    /// to populate likelihood and residuals. Used by tests and simulation
    /// round-trips.
    static FittedSarima from_parameters(const SarimaSpec& spec, const SarimaParams& params,
                                        const MonthlySeries& training);

    /// Structured text dump (spec, parameters, loglik, AICc).
    std::string dump() const;
    static FittedSarima parse_dump(const std::string& text, const MonthlySeries& training);
};

struct FitOptions {
    int max_evaluations = 1000;
    double rel_tolerance = 1e-8;
};

/// Exact Gaussian maximum likelihood via the state-space innovations
/// recursion. Stationarity/invertibility are enforced through a partial
/// autocorrelation reparametrization, so every candidate the optimizer
/// sees is admissible. Throws std::length_error when the series is too
/// short and std::runtime_error on a degenerate innovation variance.
FittedSarima fit(const MonthlySeries& series, const SarimaSpec& spec, const FitOptions& opts = {});

/// AICc = AIC + 2k(k+1)/(n-k-1); +infinity when n <= k+1.
double aicc_value(double log_likelihood, int k, int n);

/// Forecasts `horizon` months past the end of the training sample.
/// Throws std::invalid_argument for horizon <= 0.
Forecast forecast(const FittedSarima& fit, int horizon, const std::vector<int>& levels = {80, 95});

/// Simulates a SARIMA path. Deterministic given the seed; a burn-in of at
/// least 10*(p+q+(P+Q)*period)+100 draws is discarded before integration.
/// Rejects non-stationary/non-invertible parameters.
MonthlySeries simulate(const SarimaSpec& spec, const SarimaParams& params, int n, uint64_t seed,
                       YearMonth start = {2000, 1});

namespace detail {

/// Durbin-Levinson map from partial autocorrelations in (-1,1) to
/// stationary AR coefficients, and its inverse.
std::vector<double> pacf_to_ar(const std::vector<double>& pacf);
std::vector<double> ar_to_pacf(const std::vector<double>& ar);
bool is_stationary(const std::vector<double>& ar);

/// Expands seasonal and non-seasonal lag polynomials into the full
/// coefficient vectors of the ARMA form of the differenced process.
std::vector<double> expand_product_ar(const std::vector<double>& phi,
                                      const std::vector<double>& seasonal_phi, int period);
std::vector<double> expand_product_ma(const std::vector<double>& theta,
                                      const std::vector<double>& seasonal_theta, int period);

/// MA(infinity) weights of the process described by the full AR polynomial
/// (differencing included) and full MA coefficients.
std::vector<double> psi_weights(const std::vector<double>& full_ar,
                                const std::vector<double>& full_ma, int count);

}  // namespace detail

}  // namespace firmtrack::ts
