#include "qconn/quantile_reg.hpp"

#include <cmath>
#include <stdexcept>

namespace qconn {

namespace {

// Largest alpha in (0, 1] keeping v + alpha*dv strictly positive, scaled
// back from the boundary.
double step_length(const Eigen::VectorXd& v, const Eigen::VectorXd& dv, double scale) {
    double alpha = 1.0 / scale;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (dv(i) < 0.0) {
            alpha = std::min(alpha, -v(i) / dv(i));
        }
    }
    return std::min(1.0, scale * alpha);
}

}  // namespace

double pinball_objective(const Eigen::VectorXd& residuals, double tau) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < residuals.size(); ++i) {
        total += pinball_loss(residuals(i), tau);
    }
    return total;
}

QuantileFit fit_quantile(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         double tau, const QrOptions& options) {
    const Eigen::Index t = design.rows();
    const Eigen::Index k = design.cols();
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::invalid_argument("fit_quantile: tau must lie strictly inside (0, 1)");
    }
    if (response.size() != t) {
        throw std::invalid_argument("fit_quantile: design and response row counts differ");
    }
    if (t < k) {
        throw std::invalid_argument("fit_quantile: more coefficients than observations");
    }
    if (!design.allFinite() || !response.allFinite()) {
        throw std::invalid_argument("fit_quantile: non-finite entries");
    }
    if (options.check_design) {
        const Eigen::VectorXd sv = design.bdcSvd().singularValues();
        if (sv(sv.size() - 1) <= 0.0 ||
            sv(0) / sv(sv.size() - 1) > options.condition_limit) {
            throw std::runtime_error("fit_quantile: design is rank deficient or nearly so");
        }
    }

    // Bounded-dual LP:  min c'x  s.t.  X'x = (1-tau) X'1,  0 <= x <= 1,
    // with c = -y. The equality multiplier converges to minus the
    // regression coefficients.
    const Eigen::VectorXd c = -response;
    Eigen::VectorXd x = Eigen::VectorXd::Constant(t, 1.0 - tau);
    Eigen::VectorXd s = Eigen::VectorXd::Constant(t, tau);

    Eigen::VectorXd y = (design.transpose() * design)
                            .ldlt()
                            .solve(design.transpose() * c);
    const Eigen::VectorXd r0 = c - design * y;
    Eigen::VectorXd z = (r0.cwiseMax(0.0).array() + 1e-10).matrix();
    Eigen::VectorXd w = ((-r0).cwiseMax(0.0).array() + 1e-10).matrix();

    QuantileFit fit;
    fit.tau = tau;

    double gap = z.dot(x) + w.dot(s);

    int iter = 0;
    bool converged = gap < options.gap_tolerance;
    while (!converged && iter < options.max_iterations) {
        ++iter;
        const Eigen::ArrayXd xinv = x.array().inverse();
        const Eigen::ArrayXd sinv = s.array().inverse();
        const Eigen::VectorXd q = (z.array() * xinv + w.array() * sinv).inverse().matrix();
        const Eigen::VectorXd rzw = z - w;

        const Eigen::MatrixXd m = design.transpose() * q.asDiagonal() * design;
        Eigen::LDLT<Eigen::MatrixXd> solver(m);
        if (solver.info() != Eigen::Success) break;

        // Affine predictor.
        Eigen::VectorXd dy = solver.solve(design.transpose() * (q.asDiagonal() * rzw));
        Eigen::VectorXd dx = q.asDiagonal() * (design * dy - rzw);
        Eigen::VectorXd dz = (-z.array() - z.array() * xinv * dx.array()).matrix();
        Eigen::VectorXd dw = (-w.array() + w.array() * sinv * dx.array()).matrix();

        double alpha_p = std::min(step_length(x, dx, options.step_scale),
                                  step_length(s, -dx, options.step_scale));
        double alpha_d = std::min(step_length(z, dz, options.step_scale),
                                  step_length(w, dw, options.step_scale));

        if (std::min(alpha_p, alpha_d) < 1.0) {
            // Mehrotra corrector with centering chosen from the affine gap.
            const double gap_aff = (z + alpha_d * dz).dot(x + alpha_p * dx) +
                                   (w + alpha_d * dw).dot(s + alpha_p * (-dx));
            const double mu = gap / (2.0 * t) * std::pow(gap_aff / gap, 3);

            const Eigen::ArrayXd xz_corr = (mu - dx.array() * dz.array()) * xinv;
            const Eigen::ArrayXd sw_corr = (mu - (-dx.array()) * dw.array()) * sinv;
            const Eigen::VectorXd rhs = (rzw.array() - xz_corr + sw_corr).matrix();

            dy = solver.solve(design.transpose() * (q.asDiagonal() * rhs));
            dx = q.asDiagonal() * (design * dy - rhs);
            dz = (-z.array() + xz_corr - z.array() * xinv * dx.array()).matrix();
            dw = (-w.array() + sw_corr + w.array() * sinv * dx.array()).matrix();

            alpha_p = std::min(step_length(x, dx, options.step_scale),
                               step_length(s, -dx, options.step_scale));
            alpha_d = std::min(step_length(z, dz, options.step_scale),
                               step_length(w, dw, options.step_scale));
        }

        x += alpha_p * dx;
        s -= alpha_p * dx;
        y += alpha_d * dy;
        z += alpha_d * dz;
        w += alpha_d * dw;
        gap = z.dot(x) + w.dot(s);
        converged = gap < options.gap_tolerance;
    }

    fit.coefficients = -y;
    fit.residuals = response - design * fit.coefficients;
    fit.objective = pinball_objective(fit.residuals, tau);
    fit.iterations = iter;
    fit.converged = converged;
    return fit;
}

}  // namespace qconn
