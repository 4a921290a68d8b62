#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qconn/panel.hpp"
#include "qconn/rolling.hpp"

namespace qconn {

/// Rebalance dates with one long-only allocation per row (rows sum to 1).
struct WeightPath {
    std::vector<std::string> dates;
    Eigen::MatrixXd weights;  ///< dates x assets
};

/// Risk/return profile of a realized portfolio return series.
struct PerformanceReport {
    double mean_return = 0.0;
    double std_dev = 0.0;
    double sharpe_std = 0.0;
    double sharpe_var = 0.0;
    double sharpe_cvar = 0.0;
    Eigen::VectorXd he;          ///< hedging effectiveness per asset
    Eigen::VectorXd he_pvalue;   ///< variance-ratio F-test, two sided
    Eigen::VectorXd cumulative;  ///< running sum of realized returns
};

/// Projects onto the long-only simplex: clip negatives to zero and rescale
/// the rest to sum to one, repeating if needed.
[[nodiscard]] Eigen::VectorXd project_to_simplex(Eigen::VectorXd weights);

/// Minimum variance weights Sigma^{-1} 1 / (1' Sigma^{-1} 1), long-only
/// projected. Throws on a singular covariance.
[[nodiscard]] Eigen::VectorXd mvp_weights(const Eigen::MatrixXd& cov);

/// Same formula with a correlation matrix in place of the covariance.
[[nodiscard]] Eigen::VectorXd mcp_weights(const Eigen::MatrixXd& corr);

/// Symmetric pairwise connectedness index:
///   PCI_ij = 2 (theta_ij + theta_ji) / (theta_ii + theta_ij + theta_ji + theta_jj)
/// with a unit diagonal.
[[nodiscard]] Eigen::MatrixXd pairwise_connectedness_index(const Eigen::MatrixXd& theta_tilde);

/// Minimum connectedness weights PCI^{-1} 1 / (1' PCI^{-1} 1), projected.
[[nodiscard]] Eigen::VectorXd mcop_weights(const Eigen::MatrixXd& pci);

/// HE = 1 - var(portfolio)/var(asset), with a two-sample F-test p-value
/// for variance equality. Requires aligned series of length >= 30 and a
/// nonzero asset variance.
[[nodiscard]] std::pair<double, double> hedging_effectiveness(const Eigen::VectorXd& portfolio,
                                                              const Eigen::VectorXd& asset);

enum class SharpeDenominator { StdDev, Var, Cvar };

/// Mean return over a risk denominator (zero risk-free rate): the sample
/// standard deviation, |empirical alpha-quantile| (VaR), or |mean of the
/// returns at or below that quantile| (CVaR). Quantiles interpolate order
/// statistics at position (T-1)*alpha. Throws on a zero denominator.
[[nodiscard]] double sharpe(const Eigen::VectorXd& returns, SharpeDenominator denominator,
                            double alpha = 0.05);

enum class Strategy { Mvp, Mcp, Mcop };

struct BacktestResult {
    WeightPath path;
    std::vector<std::string> realized_dates;
    Eigen::VectorXd realized;  ///< out-of-sample portfolio returns
    PerformanceReport full;
    std::optional<PerformanceReport> pre;   ///< before the break date
    std::optional<PerformanceReport> post;  ///< from the break date onward
    std::vector<std::string> flags;         ///< skipped windows, with reasons
};

/// Rolling out-of-sample backtest. At each window end the strategy input
/// (sample covariance, correlation, or the window's normalized GFEVD at
/// tau for the connectedness portfolio) is estimated on the trailing
/// window and the weights are applied to the next period's returns.
/// Windows advance by config.step; weights are held between rebalances.
[[nodiscard]] BacktestResult backtest(const ReturnPanel& panel, Strategy strategy, double tau,
                                      const RollingConfig& config,
                                      const std::optional<std::string>& break_date = {});

/// Cumulative sum of realized portfolio returns: each weight row applies
/// to the panel row immediately after its date. Throws on misalignment.
[[nodiscard]] Eigen::VectorXd cumulative_returns(const WeightPath& path,
                                                 const ReturnPanel& panel);

}  // namespace qconn
