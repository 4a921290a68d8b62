#include "qconn/connectedness.hpp"

#include <stdexcept>

namespace qconn {

Eigen::MatrixXd gfevd(const VmaCoefficients& psi, const Eigen::MatrixXd& sigma, int horizon) {
    if (horizon < 0 || horizon > psi.h_trunc()) {
        throw std::invalid_argument("gfevd: horizon exceeds the moving-average truncation");
    }
    const Eigen::Index n = sigma.rows();
    if ((sigma.diagonal().array() <= 0.0).any()) {
        throw std::invalid_argument("gfevd: sigma has a nonpositive diagonal entry");
    }
    Eigen::MatrixXd numerator = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd denominator = Eigen::VectorXd::Zero(n);
    for (int h = 0; h <= horizon; ++h) {
        const Eigen::MatrixXd& psi_h = psi.psi[static_cast<std::size_t>(h)];
        const Eigen::MatrixXd ps = psi_h * sigma;
        numerator += ps.cwiseProduct(ps);
        denominator += ps.cwiseProduct(psi_h).rowwise().sum();
    }
    return ((numerator.array().rowwise() / sigma.diagonal().transpose().array()).colwise() /
            denominator.array())
        .matrix();
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& theta) {
    const Eigen::VectorXd row_sums = theta.rowwise().sum();
    if ((row_sums.array() <= 0.0).any()) {
        throw std::invalid_argument("normalize_rows: nonpositive row sum");
    }
    return (theta.array().colwise() / row_sums.array()).matrix();
}

ConnectednessTable measures(const Eigen::MatrixXd& theta_tilde, TciDenominator denominator) {
    const Eigen::Index n = theta_tilde.rows();
    if (n == 0 || theta_tilde.cols() != n) {
        throw std::invalid_argument("measures: square matrix required");
    }
    ConnectednessTable table;
    table.theta = theta_tilde;
    table.npdc = 100.0 * (theta_tilde - theta_tilde.transpose());
    table.to = 100.0 * (theta_tilde.colwise().sum().transpose() - theta_tilde.diagonal());
    table.from = 100.0 * (theta_tilde.rowwise().sum() - theta_tilde.diagonal());
    table.net = table.to - table.from;
    const double den =
        denominator == TciDenominator::NodeCount ? static_cast<double>(n)
                                                 : static_cast<double>(n - 1);
    table.tci = table.to.sum() / den;
    return table;
}

}  // namespace qconn
