#pragma once

#include "exi/types.hpp"

#include <span>
#include <vector>

namespace exi {

/// Regularized lower incomplete gamma P(a, x); Q(a, x) = 1 - P(a, x).
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Upper-tail probability of the chi-squared distribution.
double chi_squared_sf(double x, double df);

/// Standard normal CDF and quantile (Wichura's AS 241, double precision).
double normal_cdf(double x);
double normal_quantile(double p);

/// Quantile by linear interpolation between order statistics, h = (n-1)p
/// (the same rule everywhere in this library). data need not be sorted.
double quantile(std::span<const double> data, double p);

/// quantile(., 0.5).
double median(std::span<const double> data);

/// Quantiles of a pre-sorted sample (ascending), same rule as quantile().
double quantile_sorted(std::span<const double> sorted, double p);

/// Population moments (divide by N).
double mean(std::span<const double> data);
double variance(std::span<const double> data);

}  // namespace exi
