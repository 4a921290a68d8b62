#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qconn/panel.hpp"
#include "qconn/quantile_reg.hpp"

namespace qconn {

/// Quantile VAR(p) fitted equation by equation.
struct QvarModel {
    double tau = 0.5;
    int p = 1;
    Eigen::VectorXd mu;                 ///< n intercepts
    std::vector<Eigen::MatrixXd> phi;   ///< p lag matrices, each n x n
    Eigen::MatrixXd residuals;          ///< (T - p) x n, time order
    Eigen::MatrixXd sigma;              ///< n x n residual covariance, symmetric
    double spectral_radius = 0.0;       ///< of the companion matrix
    bool stable = true;                 ///< spectral_radius < 1
};

/// Truncated moving-average representation. psi[0] is the identity.
struct VmaCoefficients {
    std::vector<Eigen::MatrixXd> psi;
    [[nodiscard]] int h_trunc() const { return static_cast<int>(psi.size()) - 1; }
};

/// Builds the common lagged design for a VAR(p): rows are
/// [1, y_{t-1}', ..., y_{t-p}'] for t = p..T-1.
[[nodiscard]] Eigen::MatrixXd qvar_design(const Eigen::MatrixXd& y, int p);

/// Fits one QVAR(p) at quantile tau. Each equation regresses y_{i,t} on
/// the shared lagged design via fit_quantile; sigma is the centered sample
/// covariance of the residuals with denominator T - p. Non-convergence of
/// any equation is an error carrying the equation index. n_threads > 1
/// fans the equations out across threads.
[[nodiscard]] QvarModel fit_qvar(const Eigen::MatrixXd& y, int p, double tau,
                                 const QrOptions& qr_options = {}, int n_threads = 1);

[[nodiscard]] QvarModel fit_qvar(const ReturnPanel& panel, int p, double tau,
                                 const QrOptions& qr_options = {}, int n_threads = 1);

enum class BicVariant {
    Gaussian,  ///< ln det(Sigma_OLS) + ln(T*)/T* * (n^2 p + n)
    CheckLoss  ///< sum_i ln(mean pinball) + ln(T*)/(2 T*) * (n^2 p + n)
};

/// Selects the VAR lag order on {1..p_max} by BIC, scoring all candidates
/// on the common sample trimmed to p_max. The Gaussian variant scores OLS
/// fits; the check-loss variant scores quantile fits at the given tau.
[[nodiscard]] int select_lag_bic(const Eigen::MatrixXd& y, int p_max,
                                 BicVariant variant = BicVariant::Gaussian, double tau = 0.5);

[[nodiscard]] int select_lag_bic(const ReturnPanel& panel, int p_max,
                                 BicVariant variant = BicVariant::Gaussian, double tau = 0.5);

/// Moving-average recursion Psi_0 = I, Psi_h = sum_{j<=min(h,p)} Phi_j Psi_{h-j}.
[[nodiscard]] VmaCoefficients vma_coefficients(const QvarModel& model, int h_trunc);

}  // namespace qconn
