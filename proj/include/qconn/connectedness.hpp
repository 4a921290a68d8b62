#pragma once

#include <Eigen/Dense>
#include <string>

#include "qconn/qvar.hpp"

namespace qconn {

/// Denominator of the total connectedness index.
enum class TciDenominator { NodeCount, NodeCountMinusOne };

/// All Diebold-Yilmaz-style measures for one window, quantile, and band.
/// theta holds shares (rows of the total table sum to one); the measure
/// fields are reported in percent.
struct ConnectednessTable {
    Eigen::MatrixXd theta;  ///< n x n variance-decomposition shares
    Eigen::MatrixXd npdc;   ///< theta_ij - theta_ji, percent, antisymmetric
    Eigen::VectorXd to;     ///< column sums without the diagonal, percent
    Eigen::VectorXd from;   ///< row sums without the diagonal, percent
    Eigen::VectorXd net;    ///< to - from, percent
    double tci = 0.0;       ///< mean of to (equivalently from), percent
    int horizon = 0;
    double tau = 0.5;
    std::string band = "total";
};

/// Generalized forecast-error variance decomposition at horizon H:
///   theta_ij = sigma_jj^{-1} sum_{h=0}^{H} ((Psi_h Sigma)_ij)^2
///              / sum_{h=0}^{H} (Psi_h Sigma Psi_h')_ii
/// Requires H <= psi.h_trunc() and strictly positive diagonal of sigma.
[[nodiscard]] Eigen::MatrixXd gfevd(const VmaCoefficients& psi, const Eigen::MatrixXd& sigma,
                                    int horizon);

/// Scales each row to sum to one. Throws on nonpositive row sums.
[[nodiscard]] Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& theta);

/// NPDC / TO / FROM / NET / TCI from a row-normalized decomposition.
[[nodiscard]] ConnectednessTable measures(const Eigen::MatrixXd& theta_tilde,
                                          TciDenominator denominator = TciDenominator::NodeCount);

}  // namespace qconn
