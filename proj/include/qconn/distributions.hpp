#pragma once

namespace qconn::dist {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x);

/// Two-sided normal p-value for a z statistic: 2*(1 - Phi(|z|)).
[[nodiscard]] double normal_two_sided_pvalue(double z);

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] double reg_lower_inc_gamma(double a, double x);

/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double reg_inc_beta(double a, double b, double x);

/// Chi-squared survival function P(X > x) with k degrees of freedom.
[[nodiscard]] double chi_squared_sf(double x, double k);

/// F distribution CDF with (d1, d2) degrees of freedom.
[[nodiscard]] double f_cdf(double x, double d1, double d2);

/// F distribution survival function.
[[nodiscard]] double f_sf(double x, double d1, double d2);

}  // namespace qconn::dist
