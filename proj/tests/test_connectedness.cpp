#include <doctest.h>

#include <cmath>
#include <vector>

#include "qconn/connectedness.hpp"
#include "qconn/simulate.hpp"

using namespace qconn;

namespace {

// Brute-force expansion of the decomposition with plain scalar loops,
// independent of the library path: builds Psi_h term by term, then sums
// squared impulse entries.
Eigen::MatrixXd gfevd_oracle(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& sigma, int h) {
    const int n = static_cast<int>(phi.rows());
    std::vector<Eigen::MatrixXd> psi;
    psi.push_back(Eigen::MatrixXd::Identity(n, n));
    for (int s = 1; s <= h; ++s) {
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += phi(i, k) * psi.back()(k, j);
                next(i, j) = acc;
            }
        }
        psi.push_back(next);
    }
    Eigen::MatrixXd theta(n, n);
    for (int i = 0; i < n; ++i) {
        double denom = 0.0;
        for (int s = 0; s <= h; ++s) {
            // (Psi_s Sigma Psi_s')_{ii}
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    denom += psi[static_cast<std::size_t>(s)](i, a) * sigma(a, b) *
                             psi[static_cast<std::size_t>(s)](i, b);
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            double numer = 0.0;
            for (int s = 0; s <= h; ++s) {
                double entry = 0.0;
                for (int a = 0; a < n; ++a) {
                    entry += psi[static_cast<std::size_t>(s)](i, a) * sigma(a, j);
                }
                numer += entry * entry;
            }
            theta(i, j) = numer / (sigma(j, j) * denom);
        }
    }
    return theta;
}

VmaCoefficients vma_of(const Eigen::MatrixXd& phi, int h) {
    QvarModel model;
    model.p = 1;
    model.phi = {phi};
    model.sigma = Eigen::MatrixXd::Identity(phi.rows(), phi.cols());
    return vma_coefficients(model, h);
}

Eigen::MatrixXd random_stable_phi(int n, sim::Rng& rng, double target_radius = 0.45) {
    Eigen::MatrixXd phi(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) phi(i, j) = rng.normal();
    }
    const double radius = phi.eigenvalues().cwiseAbs().maxCoeff();
    return phi * (target_radius / std::max(radius, 1e-8));
}

Eigen::MatrixXd random_covariance(int n, sim::Rng& rng) {
    Eigen::MatrixXd root(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) root(i, j) = rng.normal();
    }
    return root * root.transpose() / n + 0.25 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("gfevd with no dynamics and diagonal sigma is the identity") {
    const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Zero(3, 3), 5);
    Eigen::MatrixXd sigma = Eigen::VectorXd::LinSpaced(3, 1.0, 3.0).asDiagonal();
    const Eigen::MatrixXd theta = gfevd(vma, sigma, 5);
    CHECK((theta - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gfevd with pure correlation matches the closed form") {
    const double rho = 0.6;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, rho, rho, 1.0;
    const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Zero(2, 2), 1);
    const Eigen::MatrixXd theta = gfevd(vma, sigma, 0);
    CHECK(theta(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(theta(0, 1) == doctest::Approx(rho * rho).epsilon(1e-14));
    CHECK(theta(1, 0) == doctest::Approx(rho * rho).epsilon(1e-14));
    // each raw row sums to 1 + rho^2 before normalization
    CHECK(theta.row(0).sum() == doctest::Approx(1.0 + rho * rho).epsilon(1e-14));
}

TEST_CASE("gfevd equals the brute-force oracle on the reference VAR(1)") {
    Eigen::MatrixXd phi(2, 2);
    phi << 0.5, 0.2, 0.0, 0.3;
    Eigen::MatrixXd sigma_corr(2, 2);
    sigma_corr << 1.0, 0.4, 0.4, 1.0;
    for (const auto& sigma : {Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)), sigma_corr}) {
        const VmaCoefficients vma = vma_of(phi, 20);
        for (int h : {0, 1, 2, 5, 20}) {
            const Eigen::MatrixXd expected = gfevd_oracle(phi, sigma, h);
            const Eigen::MatrixXd actual = gfevd(vma, sigma, h);
            CHECK((expected - actual).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("gfevd is invariant to rescaling sigma") {
    sim::Rng rng(21);
    const Eigen::MatrixXd phi = random_stable_phi(3, rng);
    const Eigen::MatrixXd sigma = random_covariance(3, rng);
    const VmaCoefficients vma = vma_of(phi, 10);
    const Eigen::MatrixXd base = gfevd(vma, sigma, 10);
    const Eigen::MatrixXd scaled = gfevd(vma, 7.3 * sigma, 10);
    CHECK((base - scaled).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize_rows basics") {
    CHECK(normalize_rows(Eigen::MatrixXd::Identity(4, 4)) == Eigen::MatrixXd::Identity(4, 4));
    Eigen::MatrixXd m(1, 2);
    m << 2.0, 2.0;
    const Eigen::MatrixXd normalized = normalize_rows(m);
    CHECK(normalized(0, 0) == 0.5);
    CHECK(normalized(0, 1) == 0.5);
    Eigen::MatrixXd zero_row = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS((void)normalize_rows(zero_row), std::invalid_argument);
}

TEST_CASE("measures on the identity decomposition are all zero") {
    const ConnectednessTable table = measures(Eigen::MatrixXd::Identity(5, 5));
    CHECK(table.to.cwiseAbs().maxCoeff() == 0.0);
    CHECK(table.from.cwiseAbs().maxCoeff() == 0.0);
    CHECK(table.net.cwiseAbs().maxCoeff() == 0.0);
    CHECK(table.tci == 0.0);
}

TEST_CASE("measures on the fully mixed decomposition") {
    const int n = 4;
    const Eigen::MatrixXd theta = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const ConnectednessTable table = measures(theta);
    for (int i = 0; i < n; ++i) {
        CHECK(table.from(i) == doctest::Approx(100.0 * (n - 1.0) / n).epsilon(1e-12));
        CHECK(table.to(i) == doctest::Approx(100.0 * (n - 1.0) / n).epsilon(1e-12));
    }
    CHECK(table.tci == doctest::Approx(100.0 * (n - 1.0) / n).epsilon(1e-12));
}

TEST_CASE("row-stochastic identities on randomized models") {
    sim::Rng rng(1234);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_raw() % 4);
        const Eigen::MatrixXd phi = random_stable_phi(n, rng);
        const Eigen::MatrixXd sigma = random_covariance(n, rng);
        const VmaCoefficients vma = vma_of(phi, 20);
        const Eigen::MatrixXd theta_tilde = normalize_rows(gfevd(vma, sigma, 20));
        const ConnectednessTable table = measures(theta_tilde);

        CHECK((theta_tilde.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK(theta_tilde.minCoeff() >= 0.0);
        CHECK(std::fabs(table.net.sum()) < 1e-8);
        CHECK((table.npdc + table.npdc.transpose()).cwiseAbs().maxCoeff() < 1e-12);

        // the two total-index formulas coincide
        const double tci_from = table.from.sum() / n;
        CHECK(table.tci == doctest::Approx(tci_from).epsilon(1e-10));
        // and equal 100 * (n - trace)/n for a row-stochastic matrix
        CHECK(table.tci ==
              doctest::Approx(100.0 * (n - theta_tilde.trace()) / n).epsilon(1e-10));
    }
}

TEST_CASE("permutation equivariance of the measures") {
    sim::Rng rng(77);
    const int n = 4;
    const Eigen::MatrixXd phi = random_stable_phi(n, rng);
    const Eigen::MatrixXd sigma = random_covariance(n, rng);
    const Eigen::MatrixXd theta = normalize_rows(gfevd(vma_of(phi, 10), sigma, 10));
    const ConnectednessTable base = measures(theta);

    const int order[n] = {2, 0, 3, 1};
    Eigen::MatrixXd shuffled(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) shuffled(i, j) = theta(order[i], order[j]);
    }
    const ConnectednessTable permuted = measures(shuffled);
    for (int i = 0; i < n; ++i) {
        CHECK(permuted.net(i) == doctest::Approx(base.net(order[i])).epsilon(1e-12));
        CHECK(permuted.to(i) == doctest::Approx(base.to(order[i])).epsilon(1e-12));
    }
    CHECK(permuted.tci == doctest::Approx(base.tci).epsilon(1e-12));
}

TEST_CASE("tci denominator switch") {
    const int n = 5;
    const Eigen::MatrixXd theta = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const ConnectednessTable by_n = measures(theta, TciDenominator::NodeCount);
    const ConnectednessTable by_n1 = measures(theta, TciDenominator::NodeCountMinusOne);
    CHECK(by_n1.tci == doctest::Approx(by_n.tci * n / (n - 1.0)).epsilon(1e-12));
}
