#include "qconn/qvar.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qconn {

namespace {

void validate_sample_size(Eigen::Index t, Eigen::Index n, int p) {
    if (p < 1) {
        throw std::invalid_argument("qvar: lag order must be at least 1");
    }
    if (t - p <= n * p + 1) {
        std::ostringstream msg;
        msg << "qvar: " << t << " observations are too few for n=" << n << ", p=" << p;
        throw std::invalid_argument(msg.str());
    }
}

double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& phi) {
    const Eigen::Index n = phi[0].rows();
    const auto p = static_cast<Eigen::Index>(phi.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * p, n * p);
    for (Eigen::Index j = 0; j < p; ++j) {
        companion.block(0, j * n, n, n) = phi[static_cast<std::size_t>(j)];
    }
    if (p > 1) {
        companion.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
    }
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::MatrixXd qvar_design(const Eigen::MatrixXd& y, int p) {
    const Eigen::Index t = y.rows();
    const Eigen::Index n = y.cols();
    const Eigen::Index rows = t - p;
    Eigen::MatrixXd design(rows, 1 + n * p);
    design.col(0).setOnes();
    for (int lag = 1; lag <= p; ++lag) {
        design.block(0, 1 + (lag - 1) * n, rows, n) = y.middleRows(p - lag, rows);
    }
    return design;
}

QvarModel fit_qvar(const Eigen::MatrixXd& y, int p, double tau, const QrOptions& qr_options,
                   int n_threads) {
    const Eigen::Index t = y.rows();
    const Eigen::Index n = y.cols();
    validate_sample_size(t, n, p);

    const Eigen::MatrixXd design = qvar_design(y, p);
    const Eigen::MatrixXd responses = y.bottomRows(t - p);

    // Validate the shared design once; per-equation fits reuse it.
    if (qr_options.check_design) {
        const Eigen::VectorXd sv = design.bdcSvd().singularValues();
        if (sv(sv.size() - 1) <= 0.0 ||
            sv(0) / sv(sv.size() - 1) > qr_options.condition_limit) {
            throw std::runtime_error("fit_qvar: lagged design is rank deficient or nearly so");
        }
    }
    QrOptions eq_options = qr_options;
    eq_options.check_design = false;

    QvarModel model;
    model.tau = tau;
    model.p = p;
    model.mu.resize(n);
    model.phi.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(n, n));
    model.residuals.resize(t - p, n);

    std::vector<std::string> failures(static_cast<std::size_t>(n));
    const auto fit_equation = [&](Eigen::Index i) {
        try {
            const QuantileFit fit = fit_quantile(design, responses.col(i), tau, eq_options);
            if (!fit.converged) {
                std::ostringstream msg;
                msg << "equation " << i << ": no convergence in " << fit.iterations
                    << " iterations";
                failures[static_cast<std::size_t>(i)] = msg.str();
                return;
            }
            model.mu(i) = fit.coefficients(0);
            for (int lag = 0; lag < p; ++lag) {
                model.phi[static_cast<std::size_t>(lag)].row(i) =
                    fit.coefficients.segment(1 + lag * n, n).transpose();
            }
            model.residuals.col(i) = fit.residuals;
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "equation " << i << ": " << e.what();
            failures[static_cast<std::size_t>(i)] = msg.str();
        }
    };

    if (n_threads > 1 && n > 1) {
        std::atomic<Eigen::Index> next{0};
        const int workers = std::min<int>(n_threads, static_cast<int>(n));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (Eigen::Index i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    fit_equation(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    } else {
        for (Eigen::Index i = 0; i < n; ++i) fit_equation(i);
    }

    for (const auto& failure : failures) {
        if (!failure.empty()) {
            throw std::runtime_error("fit_qvar: " + failure);
        }
    }

    const Eigen::RowVectorXd mean = model.residuals.colwise().mean();
    const Eigen::MatrixXd centered = model.residuals.rowwise() - mean;
    model.sigma = centered.transpose() * centered / static_cast<double>(t - p);
    model.sigma = ((model.sigma + model.sigma.transpose()) / 2.0).eval();
    model.spectral_radius = companion_spectral_radius(model.phi);
    model.stable = model.spectral_radius < 1.0;
    return model;
}

QvarModel fit_qvar(const ReturnPanel& panel, int p, double tau, const QrOptions& qr_options,
                   int n_threads) {
    return fit_qvar(panel.values, p, tau, qr_options, n_threads);
}

int select_lag_bic(const Eigen::MatrixXd& y, int p_max, BicVariant variant, double tau) {
    if (p_max < 1) {
        throw std::invalid_argument("select_lag_bic: p_max must be at least 1");
    }
    const Eigen::Index t = y.rows();
    const Eigen::Index n = y.cols();
    validate_sample_size(t, n, p_max);
    const Eigen::Index t_star = t - p_max;
    const Eigen::MatrixXd full_design = qvar_design(y, p_max);
    const Eigen::MatrixXd responses = y.bottomRows(t_star);

    int best_p = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        // Columns for lags 1..p of the design built at p_max share the
        // same response rows, so candidates are scored on a common sample.
        const Eigen::MatrixXd design = full_design.leftCols(1 + n * p);
        const double params = static_cast<double>(n) * n * p + n;
        const double log_t = std::log(static_cast<double>(t_star));
        double bic = 0.0;
        if (variant == BicVariant::Gaussian) {
            const Eigen::MatrixXd beta =
                (design.transpose() * design).ldlt().solve(design.transpose() * responses);
            const Eigen::MatrixXd resid = responses - design * beta;
            const Eigen::MatrixXd sigma =
                resid.transpose() * resid / static_cast<double>(t_star);
            const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
            double log_det;
            if (llt.info() == Eigen::Success) {
                log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
            } else {
                log_det = std::log(std::max(sigma.determinant(), 1e-300));
            }
            bic = log_det + log_t / static_cast<double>(t_star) * params;
        } else {
            double sum_log_loss = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const QuantileFit fit = fit_quantile(design, responses.col(i), tau);
                sum_log_loss +=
                    std::log(std::max(fit.objective / static_cast<double>(t_star), 1e-300));
            }
            bic = sum_log_loss + log_t / (2.0 * static_cast<double>(t_star)) * params;
        }
        if (bic < best_bic) {
            best_bic = bic;
            best_p = p;
        }
    }
    return best_p;
}

int select_lag_bic(const ReturnPanel& panel, int p_max, BicVariant variant, double tau) {
    return select_lag_bic(panel.values, p_max, variant, tau);
}

VmaCoefficients vma_coefficients(const QvarModel& model, int h_trunc) {
    if (h_trunc < 1) {
        throw std::invalid_argument("vma_coefficients: h_trunc must be at least 1");
    }
    const Eigen::Index n = model.sigma.rows();
    VmaCoefficients vma;
    vma.psi.reserve(static_cast<std::size_t>(h_trunc) + 1);
    vma.psi.push_back(Eigen::MatrixXd::Identity(n, n));
    for (int h = 1; h <= h_trunc; ++h) {
        Eigen::MatrixXd psi_h = Eigen::MatrixXd::Zero(n, n);
        for (int j = 1; j <= std::min(h, model.p); ++j) {
            psi_h += model.phi[static_cast<std::size_t>(j - 1)] *
                     vma.psi[static_cast<std::size_t>(h - j)];
        }
        vma.psi.push_back(std::move(psi_h));
    }
    return vma;
}

}  // namespace qconn
