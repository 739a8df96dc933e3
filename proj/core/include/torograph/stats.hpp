#pragma once

#include <span>
#include <vector>

namespace torograph {

/// log(sum_i exp(x_i)), stabilized against overflow. Empty input -> -inf.
double log_sum_exp(std::span<const double> values);
double log_sum_exp(double a, double b);

double normal_logpdf(double x, double mean, double variance);
double normal_cdf(double z);
double normal_sf(double z);

/// Standard Gaussian quantile (Wichura's AS241 rational approximations,
/// accurate to ~1e-15 on (0, 1)).
double normal_quantile(double prob);

/// Survival function of the chi-square distribution with one degree of
/// freedom: P(X > x) = erfc(sqrt(x/2)).
double chisq1_sf(double x);

/// Two-sided p-value of a standard normal statistic.
double two_sided_normal_pvalue(double z);

/// Holm step-down adjusted p-values, in the input's order. Adjusted values
/// are monotone in the sorted order and never below the raw p-values.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

}  // namespace torograph
