#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace firmtrack::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);         // divisor n
double sample_variance(std::span<const double> x);  // divisor n-1

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse standard normal CDF (Acklam's rational approximation, refined
/// with one Halley step; |error| < 1e-12 over (0,1)).
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);

/// Empirical quantile with the nearest-rank definition: smallest value v
/// such that at least ceil(p*n) observations are <= v.
double nearest_rank_quantile(std::vector<double> x, double p);

}  // namespace firmtrack::stats
