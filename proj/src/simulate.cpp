#include "qconn/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace qconn::sim {

namespace {

Eigen::MatrixXd sigma_chol(const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("simulate: sigma is not positive definite");
    }
    return llt.matrixL();
}

Eigen::VectorXd normal_vector(Eigen::Index n, Rng& rng) {
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    return z;
}

}  // namespace

Eigen::MatrixXd iid_gaussian(int t, int n, Rng& rng) {
    Eigen::MatrixXd out(t, n);
    for (Eigen::Index i = 0; i < t; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = rng.normal();
    }
    return out;
}

Eigen::MatrixXd var1_gaussian(int t, const Eigen::MatrixXd& phi, const Eigen::MatrixXd& sigma,
                              Rng& rng, int burn_in) {
    const Eigen::Index n = phi.rows();
    const Eigen::MatrixXd chol = sigma_chol(sigma);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd out(t, n);
    for (int i = 0; i < burn_in + t; ++i) {
        y = phi * y + chol * normal_vector(n, rng);
        if (i >= burn_in) out.row(i - burn_in) = y.transpose();
    }
    return out;
}

Eigen::MatrixXd var2_gaussian(int t, const Eigen::MatrixXd& phi1, const Eigen::MatrixXd& phi2,
                              const Eigen::MatrixXd& sigma, Rng& rng, int burn_in) {
    const Eigen::Index n = phi1.rows();
    const Eigen::MatrixXd chol = sigma_chol(sigma);
    Eigen::VectorXd y1 = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd y2 = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd out(t, n);
    for (int i = 0; i < burn_in + t; ++i) {
        const Eigen::VectorXd y = phi1 * y1 + phi2 * y2 + chol * normal_vector(n, rng);
        y2 = y1;
        y1 = y;
        if (i >= burn_in) out.row(i - burn_in) = y.transpose();
    }
    return out;
}

Eigen::MatrixXd common_factor_heavy_tail(int t, int n, double loading, int df, Rng& rng) {
    Eigen::MatrixXd out(t, n);
    for (Eigen::Index i = 0; i < t; ++i) {
        const double f = rng.student_t(df);
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = loading * f + rng.normal();
        }
    }
    return out;
}

Eigen::MatrixXd var1_regime_switch(int t, const Eigen::MatrixXd& phi_a,
                                   const Eigen::MatrixXd& phi_b, const Eigen::MatrixXd& sigma,
                                   Rng& rng, int burn_in) {
    const Eigen::Index n = phi_a.rows();
    const Eigen::MatrixXd chol = sigma_chol(sigma);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd out(t, n);
    const int switch_at = t / 2;
    for (int i = 0; i < burn_in + t; ++i) {
        const int sample_index = i - burn_in;
        const Eigen::MatrixXd& phi = sample_index >= switch_at ? phi_b : phi_a;
        y = phi * y + chol * normal_vector(n, rng);
        if (sample_index >= 0) out.row(sample_index) = y.transpose();
    }
    return out;
}

namespace {

std::vector<std::string> sequential_dates(Eigen::Index count, const std::string& start_date) {
    const long start = days_from_iso(start_date);
    std::vector<std::string> dates;
    dates.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i) {
        dates.push_back(iso_from_days(start + i));
    }
    return dates;
}

std::vector<std::string> default_labels(Eigen::Index n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        labels.push_back("S" + std::to_string(j + 1));
    }
    return labels;
}

}  // namespace

ReturnPanel make_return_panel(const Eigen::MatrixXd& values, const std::string& start_date) {
    ReturnPanel panel;
    panel.values = values;
    panel.dates = sequential_dates(values.rows(), start_date);
    panel.labels = default_labels(values.cols());
    return panel;
}

PricePanel make_price_panel(const Eigen::MatrixXd& values, const std::string& start_date) {
    PricePanel panel;
    panel.values = values;
    panel.dates = sequential_dates(values.rows(), start_date);
    panel.labels = default_labels(values.cols());
    return panel;
}

Eigen::MatrixXd prices_from_returns(const Eigen::MatrixXd& returns) {
    Eigen::MatrixXd prices(returns.rows() + 1, returns.cols());
    prices.row(0).setConstant(100.0);
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
        prices.row(t + 1) = prices.row(t).array() * returns.row(t).array().exp();
    }
    return prices;
}

}  // namespace qconn::sim
