#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qconn/frequency.hpp"
#include "qconn/simulate.hpp"

using namespace qconn;

namespace {

constexpr double kPi = std::numbers::pi;

VmaCoefficients vma_of(const Eigen::MatrixXd& phi, int h) {
    QvarModel model;
    model.p = 1;
    model.phi = {phi};
    model.sigma = Eigen::MatrixXd::Identity(phi.rows(), phi.cols());
    return vma_coefficients(model, h);
}

Eigen::MatrixXd reference_phi() {
    Eigen::MatrixXd phi(2, 2);
    phi << 0.5, 0.2, 0.0, 0.3;
    return phi;
}

}  // namespace

TEST_CASE("frequency response closed forms") {
    SUBCASE("omega zero sums the coefficients") {
        const VmaCoefficients vma = vma_of(reference_phi(), 50);
        Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(2, 2);
        for (const auto& psi : vma.psi) direct += psi;
        const Eigen::MatrixXcd at_zero = frequency_response(vma, 0.0);
        CHECK(at_zero.imag().cwiseAbs().maxCoeff() < 1e-12);
        CHECK((at_zero.real() - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("no dynamics gives the identity at every frequency") {
        const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Zero(3, 3), 20);
        for (double omega : {0.1, 1.0, kPi}) {
            const Eigen::MatrixXcd r = frequency_response(vma, omega);
            CHECK((r - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
    SUBCASE("scalar geometric series matches 1/(1 - 0.5 e^{-iw})") {
        const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Constant(1, 1, 0.5), 100);
        const double omega = kPi / 3.0;
        const std::complex<double> closed =
            1.0 / (1.0 - 0.5 * std::polar(1.0, -omega));
        const std::complex<double> truncated = frequency_response(vma, omega)(0, 0);
        CHECK(std::abs(truncated - closed) < 1e-6);
    }
    SUBCASE("responses at omega and 2pi - omega are conjugates") {
        const VmaCoefficients vma = vma_of(reference_phi(), 40);
        const double omega = 0.9;
        const Eigen::MatrixXcd a = frequency_response(vma, omega);
        const Eigen::MatrixXcd b = frequency_response(vma, 2.0 * kPi - omega);
        CHECK((a - b.conjugate()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("spectral slices match a direct complex-arithmetic evaluation") {
    sim::Rng rng(55);
    const VmaCoefficients vma = vma_of(reference_phi(), 60);
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.4, 0.4, 1.3;
    const std::vector<double> grid = midpoint_grid(17);
    const auto slices = spectral_gfevd(vma, sigma, grid);
    REQUIRE(slices.size() == grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const Eigen::MatrixXcd response = frequency_response(vma, grid[g]);
        const Eigen::MatrixXcd ps = response * sigma;
        const Eigen::MatrixXcd denom_matrix = ps * response.adjoint();
        for (int i = 0; i < 2; ++i) {
            CHECK(slices[g].denominator(i) ==
                  doctest::Approx(denom_matrix(i, i).real()).epsilon(1e-10));
            for (int j = 0; j < 2; ++j) {
                CHECK(slices[g].numerator(i, j) ==
                      doctest::Approx(std::norm(ps(i, j)) / sigma(j, j)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("no-dynamics slices are flat") {
    const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Zero(2, 2), 10);
    const double rho = 0.5;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, rho, rho, 1.0;
    const auto slices = spectral_gfevd(vma, sigma, midpoint_grid(9));
    for (const auto& slice : slices) {
        CHECK(slice.numerator(0, 1) == doctest::Approx(rho * rho).epsilon(1e-12));
        CHECK(slice.numerator(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(slice.denominator(0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single band reproduces the time-domain decomposition") {
    const VmaCoefficients vma = vma_of(reference_phi(), 100);
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.4, 0.4, 1.0;
    const auto slices = spectral_gfevd(vma, sigma, midpoint_grid(500));
    const std::vector<FrequencyBand> whole = {{"all", 0.0, kPi}};
    const auto aggregates = band_aggregate(slices, whole);
    REQUIRE(aggregates.size() == 1);

    // the whole-range aggregate equals the horizon-100 decomposition
    const Eigen::MatrixXd expected = gfevd(vma, sigma, 100);
    CHECK((aggregates[0] - expected).cwiseAbs().maxCoeff() < 1e-10);

    const Eigen::MatrixXd theta_tilde = normalize_rows(gfevd(vma, sigma, 20));
    const auto tables = band_measures(aggregates, whole, theta_tilde);
    REQUIRE(tables.size() == 1);
    const ConnectednessTable total = measures(theta_tilde);
    // truncation tails beyond horizon 20 are ~1e-13 for this model
    CHECK((tables[0].theta - theta_tilde).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(tables[0].tci == doctest::Approx(total.tci).epsilon(1e-10));
}

TEST_CASE("flat spectrum splits bands by grid point count") {
    const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Zero(2, 2), 10);
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.3, 0.3, 1.0;
    const auto slices = spectral_gfevd(vma, sigma, midpoint_grid(500));
    const auto bands = default_bands();
    const auto aggregates = band_aggregate(slices, bands);
    // short band holds 400 of 500 midpoints, medium 75, long 25
    const Eigen::MatrixXd whole = aggregates[0] + aggregates[1] + aggregates[2];
    CHECK((aggregates[0] - 0.8 * whole).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((aggregates[1] - 0.15 * whole).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((aggregates[2] - 0.05 * whole).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("three default bands are additive to the time-domain measures") {
    sim::Rng rng(321);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_raw() % 3);
        Eigen::MatrixXd phi(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) phi(i, j) = rng.normal();
        }
        phi *= 0.45 / std::max(phi.eigenvalues().cwiseAbs().maxCoeff(), 1e-8);
        Eigen::MatrixXd root(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) root(i, j) = rng.normal();
        }
        const Eigen::MatrixXd sigma =
            root * root.transpose() / n + 0.3 * Eigen::MatrixXd::Identity(n, n);

        const VmaCoefficients vma = vma_of(phi, 100);
        const Eigen::MatrixXd theta_tilde = normalize_rows(gfevd(vma, sigma, 20));
        const ConnectednessTable total = measures(theta_tilde);
        const auto slices = spectral_gfevd(vma, sigma, midpoint_grid(500));
        const auto tables =
            band_measures(band_aggregate(slices, default_bands()), default_bands(),
                          theta_tilde);

        Eigen::MatrixXd theta_sum = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd to_sum = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd net_sum = Eigen::VectorXd::Zero(n);
        Eigen::MatrixXd npdc_sum = Eigen::MatrixXd::Zero(n, n);
        double tci_sum = 0.0;
        for (const auto& table : tables) {
            theta_sum += table.theta;
            to_sum += table.to;
            net_sum += table.net;
            npdc_sum += table.npdc;
            tci_sum += table.tci;
            CHECK(table.theta.minCoeff() >= 0.0);
        }
        CHECK((theta_sum - theta_tilde).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((to_sum - total.to).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((net_sum - total.net).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((npdc_sum - total.npdc).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(tci_sum == doctest::Approx(total.tci).epsilon(1e-10));
    }
}

TEST_CASE("persistence shifts mass toward the long band") {
    Eigen::MatrixXd calm = Eigen::MatrixXd::Identity(2, 2) * 0.05;
    Eigen::MatrixXd sticky = Eigen::MatrixXd::Identity(2, 2) * 0.97;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.4, 0.4, 1.0;
    const auto bands = default_bands();

    const auto share_long = [&](const Eigen::MatrixXd& phi) {
        const VmaCoefficients vma = vma_of(phi, 400);
        const auto slices = spectral_gfevd(vma, sigma, midpoint_grid(500));
        const auto agg = band_aggregate(slices, bands);
        const double whole = (agg[0] + agg[1] + agg[2]).sum();
        return agg[2].sum() / whole;  // long band share
    };
    const double calm_share = share_long(calm);
    const double sticky_share = share_long(sticky);
    CHECK(calm_share < 0.10);
    CHECK(sticky_share > 0.50);
}

TEST_CASE("band aggregation rejects empty and non-tiling bands") {
    const VmaCoefficients vma = vma_of(Eigen::MatrixXd::Zero(2, 2), 5);
    const auto slices = spectral_gfevd(vma, Eigen::MatrixXd::Identity(2, 2), midpoint_grid(50));
    const std::vector<FrequencyBand> missing_band = {
        {"lowish", 0.0, kPi / 2 - 0.05}, {"highish", kPi / 2, kPi}};
    CHECK_THROWS_AS((void)band_aggregate(slices, missing_band), std::invalid_argument);
    const std::vector<FrequencyBand> tiny = {{"tiny", 0.0, kPi / 49}, {"rest", kPi / 49, kPi}};
    CHECK_THROWS_WITH_AS((void)band_aggregate(slices, tiny), doctest::Contains("tiny"),
                         std::invalid_argument);
}

TEST_CASE("within-frequency table is row stochastic") {
    const VmaCoefficients vma = vma_of(reference_phi(), 50);
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.4, 0.4, 1.0;
    const auto slices = spectral_gfevd(vma, sigma, midpoint_grid(7));
    for (const auto& slice : slices) {
        const Eigen::MatrixXd theta = within_frequency_theta(slice);
        CHECK((theta.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}
