#pragma once

#include <span>
#include <vector>

namespace rhet::stats {

double normal_cdf(double x);
double normal_upper_tail(double x);
double normal_quantile(double p);
double student_t_quantile(double p, double df);
double expit(double x);
double logit(double p);

double mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance.
double variance(std::span<const double> x);
double correlation(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based), ties receive the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> x);

double median(std::vector<double> x);
/// Type-7 quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

/// Kolmogorov-Smirnov distance between the empirical CDF of the sample and
/// Uniform(0, 1).
double ks_uniform(std::vector<double> sample);

/// Standard bivariate normal CDF P(X <= h, Y <= k) with correlation rho.
double bivariate_normal_cdf(double h, double k, double rho);

}  // namespace rhet::stats
