#pragma once

#include <Eigen/Dense>

namespace qconn {

/// Result of one linear conditional-quantile fit.
struct QuantileFit {
    double tau = 0.5;
    Eigen::VectorXd coefficients;  ///< k entries, intercept first by caller convention
    Eigen::VectorXd residuals;     ///< response minus fitted values, length T
    double objective = 0.0;        ///< sum of check-loss values at the solution
    int iterations = 0;
    bool converged = false;
};

struct QrOptions {
    int max_iterations = 200;
    double gap_tolerance = 1e-8;      ///< duality-gap stopping threshold
    double step_scale = 0.99995;      ///< fraction of the distance to the boundary
    double condition_limit = 1e10;    ///< reject designs with cond(X) above this
    bool check_design = true;         ///< skip when the caller validated the design
};

/// Check loss rho_tau(u) = u * (tau - 1{u < 0}).
[[nodiscard]] inline double pinball_loss(double u, double tau) {
    return u * (tau - (u < 0.0 ? 1.0 : 0.0));
}

/// Total check loss of a residual vector.
[[nodiscard]] double pinball_objective(const Eigen::VectorXd& residuals, double tau);

/// Solves min_b sum_t rho_tau(y_t - x_t' b) by a primal-dual interior-point
/// method on the bounded-dual linear program (Frisch-Newton with Mehrotra
/// predictor-corrector steps). Requires T >= k, full column rank, finite
/// entries, and tau strictly inside (0, 1). Throws std::invalid_argument on
/// precondition violations and std::runtime_error on an ill-conditioned
/// design. A fit that exhausts max_iterations reports converged = false.
[[nodiscard]] QuantileFit fit_quantile(const Eigen::MatrixXd& design,
                                       const Eigen::VectorXd& response, double tau,
                                       const QrOptions& options = {});

}  // namespace qconn
