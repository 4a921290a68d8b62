#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>

#include "qconn/panel.hpp"

namespace qconn::stats {

/// Per-series return diagnostics mirroring a standard summary table.
struct SeriesSummary {
    double mean = 0.0;
    double std_dev = 0.0;          ///< sample convention, denominator T-1
    double skewness = 0.0;         ///< m3 / m2^1.5 (bias-uncorrected)
    double excess_kurtosis = 0.0;  ///< m4 / m2^2 - 3
    double jb_stat = 0.0;          ///< T/6 * (S^2 + K^2/4)
    double jb_pvalue = 1.0;        ///< chi-squared with 2 df
    double adf_stat = 0.0;
    double adf_pvalue = 1.0;
    bool zero_variance = false;  ///< skew/kurtosis/JB are NaN when set
};

/// Computes moments, the Jarque-Bera normality test, and the ADF unit-root
/// test (constant-only regression, automatic lag). Requires length >= 8.
/// A zero-variance series flags the shape statistics instead of throwing.
[[nodiscard]] SeriesSummary summarize(std::span<const double> series);

struct AdfResult {
    double stat = 0.0;
    double pvalue = 1.0;
    int lags = 0;
};

/// Augmented Dickey-Fuller test with a constant and no trend:
///     dy_t = a + g*y_{t-1} + sum_i d_i*dy_{t-i} + e_t
/// The statistic is the t ratio of g. When max_lag < 0 the lag count is
/// chosen by AIC up to floor(12*(T/100)^0.25), all candidates scored on
/// the sample trimmed to the longest lag. P-values use the MacKinnon
/// response-surface approximation for the constant-only case.
/// A degenerate regression (zero residual variance or unusable scale for
/// the t ratio) returns stat 0, p-value 1 rather than failing.
[[nodiscard]] AdfResult adf_test(std::span<const double> series, int max_lag = -1);

struct KendallResult {
    double tau = 0.0;     ///< tau-b, tie corrected
    double pvalue = 1.0;  ///< two-sided, normal approximation
};

/// Kendall rank correlation (tau-b) with the tie-corrected normal
/// approximation for the p-value. Requires equal lengths >= 10.
[[nodiscard]] KendallResult kendall_tau(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
    Eigen::MatrixXd tau;                                ///< symmetric, unit diagonal
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> significant;  ///< p < alpha
};

/// Pairwise Kendall correlations across panel columns with a significance
/// mask at level alpha. The diagonal is 1 and marked significant.
[[nodiscard]] CorrelationMatrix correlation_matrix(const ReturnPanel& panel, double alpha);

}  // namespace qconn::stats
