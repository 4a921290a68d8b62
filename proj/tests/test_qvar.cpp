#include <doctest.h>

#include <cmath>

#include "qconn/qvar.hpp"
#include "qconn/simulate.hpp"

using namespace qconn;

namespace {

Eigen::MatrixXd bivariate_phi() {
    Eigen::MatrixXd phi(2, 2);
    phi << 0.5, 0.2, 0.0, 0.3;
    return phi;
}

}  // namespace

TEST_CASE("median QVAR on white noise finds no dynamics") {
    sim::Rng rng(101);
    const Eigen::MatrixXd y = sim::iid_gaussian(5000, 3, rng);
    const QvarModel model = fit_qvar(y, 1, 0.5);
    CHECK(model.phi[0].cwiseAbs().maxCoeff() < 0.05);
    CHECK(model.residuals.rows() == 4999);
    CHECK(model.stable);
}

TEST_CASE("median QVAR recovers a known VAR(1)") {
    sim::Rng rng(202);
    const Eigen::MatrixXd phi = bivariate_phi();
    const Eigen::MatrixXd y =
        sim::var1_gaussian(5000, phi, Eigen::MatrixXd::Identity(2, 2), rng);
    const QvarModel model = fit_qvar(y, 1, 0.5);
    CHECK((model.phi[0] - phi).cwiseAbs().maxCoeff() < 0.05);
    CHECK(model.mu.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("univariate intercept sits near the quantile of white noise") {
    sim::Rng rng(303);
    const Eigen::MatrixXd y = sim::iid_gaussian(4000, 1, rng);
    const QvarModel model = fit_qvar(y, 1, 0.25);
    // N(0,1) quantile at 0.25 is about -0.6745
    CHECK(model.mu(0) == doctest::Approx(-0.6745).epsilon(0.12));
    CHECK(std::fabs(model.phi[0](0, 0)) < 0.05);
}

TEST_CASE("sigma is symmetric positive semidefinite with T-p rows used") {
    sim::Rng rng(404);
    const Eigen::MatrixXd y = sim::iid_gaussian(300, 4, rng);
    const QvarModel model = fit_qvar(y, 2, 0.4);
    CHECK(model.residuals.rows() == 298);
    CHECK((model.sigma - model.sigma.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::VectorXd eigenvalues =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(model.sigma).eigenvalues();
    CHECK(eigenvalues.minCoeff() > -1e-10 * model.sigma.trace());
}

TEST_CASE("fits at two quantiles share shapes") {
    sim::Rng rng(505);
    const Eigen::MatrixXd y = sim::iid_gaussian(400, 3, rng);
    const QvarModel low = fit_qvar(y, 1, 0.05);
    const QvarModel high = fit_qvar(y, 1, 0.95);
    CHECK(low.phi.size() == high.phi.size());
    CHECK(low.residuals.rows() == high.residuals.rows());
    CHECK(low.sigma.rows() == high.sigma.rows());
}

TEST_CASE("insufficient observations are rejected") {
    sim::Rng rng(1);
    const Eigen::MatrixXd y = sim::iid_gaussian(12, 3, rng);
    CHECK_THROWS_AS((void)fit_qvar(y, 3, 0.5), std::invalid_argument);
}

TEST_CASE("bic picks lag 1 on white noise") {
    int correct = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        sim::Rng rng(seed * 11);
        const Eigen::MatrixXd y = sim::iid_gaussian(400, 2, rng);
        if (select_lag_bic(y, 4) == 1) ++correct;
    }
    CHECK(correct >= 18);  // >= 90%
}

TEST_CASE("bic identifies a strong VAR(2)") {
    Eigen::MatrixXd phi1(2, 2), phi2(2, 2);
    phi1 << 0.3, 0.0, 0.0, 0.3;
    phi2 << 0.45, 0.15, 0.15, 0.45;
    int correct = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        sim::Rng rng(seed * 17);
        const Eigen::MatrixXd y =
            sim::var2_gaussian(3000, phi1, phi2, Eigen::MatrixXd::Identity(2, 2), rng);
        if (select_lag_bic(y, 4) == 2) ++correct;
    }
    CHECK(correct >= 18);  // >= 90%
}

TEST_CASE("bic with a singleton choice set returns 1") {
    sim::Rng rng(9);
    const Eigen::MatrixXd y = sim::iid_gaussian(100, 2, rng);
    CHECK(select_lag_bic(y, 1) == 1);
    CHECK(select_lag_bic(y, 1, BicVariant::CheckLoss, 0.5) == 1);
}

TEST_CASE("vma recursion closed forms") {
    SUBCASE("zero coefficients truncate immediately") {
        QvarModel model;
        model.p = 1;
        model.phi = {Eigen::MatrixXd::Zero(3, 3)};
        model.sigma = Eigen::MatrixXd::Identity(3, 3);
        const VmaCoefficients vma = vma_coefficients(model, 5);
        CHECK(vma.psi[0] == Eigen::MatrixXd::Identity(3, 3));
        for (int h = 1; h <= 5; ++h) {
            CHECK(vma.psi[static_cast<std::size_t>(h)].cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("scalar AR(1) gives geometric weights") {
        QvarModel model;
        model.p = 1;
        model.phi = {Eigen::MatrixXd::Constant(1, 1, 0.5)};
        model.sigma = Eigen::MatrixXd::Identity(1, 1);
        const VmaCoefficients vma = vma_coefficients(model, 10);
        for (int h = 0; h <= 10; ++h) {
            CHECK(vma.psi[static_cast<std::size_t>(h)](0, 0) ==
                  doctest::Approx(std::pow(0.5, h)).epsilon(1e-14));
        }
    }
    SUBCASE("VAR(1) moving-average terms are matrix powers") {
        QvarModel model;
        model.p = 1;
        model.phi = {bivariate_phi()};
        model.sigma = Eigen::MatrixXd::Identity(2, 2);
        const VmaCoefficients vma = vma_coefficients(model, 4);
        const Eigen::MatrixXd phi2 = bivariate_phi() * bivariate_phi();
        CHECK((vma.psi[2] - phi2).cwiseAbs().maxCoeff() < 1e-15);
        const Eigen::MatrixXd phi4 = phi2 * phi2;
        CHECK((vma.psi[4] - phi4).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("vma prefix stability") {
    sim::Rng rng(66);
    const Eigen::MatrixXd y = sim::iid_gaussian(200, 2, rng);
    const QvarModel model = fit_qvar(y, 2, 0.5);
    const VmaCoefficients long_run = vma_coefficients(model, 30);
    const VmaCoefficients short_run = vma_coefficients(model, 12);
    for (int h = 0; h <= 12; ++h) {
        CHECK(long_run.psi[static_cast<std::size_t>(h)] ==
              short_run.psi[static_cast<std::size_t>(h)]);
    }
}

TEST_CASE("explosive coefficients flag instability") {
    QvarModel model;
    model.p = 1;
    model.phi = {Eigen::MatrixXd::Constant(1, 1, 1.05)};
    model.sigma = Eigen::MatrixXd::Identity(1, 1);
    // flag comes from fitting; emulate by checking the radius helper through fit
    sim::Rng rng(8);
    Eigen::MatrixXd y(600, 1);
    double level = 0.0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        level = 1.001 * level + rng.normal();
        y(i, 0) = level;
    }
    const QvarModel fitted = fit_qvar(y, 1, 0.5);
    CHECK(fitted.spectral_radius > 0.9);
}
