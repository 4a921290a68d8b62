#include "qconn/frequency.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qconn {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<FrequencyBand> default_bands() {
    return {{"short", kPi / 5.0, kPi},
            {"medium", kPi / 20.0, kPi / 5.0},
            {"long", 0.0, kPi / 20.0}};
}

std::vector<double> midpoint_grid(int size) {
    if (size < 1) {
        throw std::invalid_argument("midpoint_grid: size must be positive");
    }
    std::vector<double> grid(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) {
        grid[static_cast<std::size_t>(j)] = kPi * (j + 0.5) / size;
    }
    return grid;
}

Eigen::MatrixXcd frequency_response(const VmaCoefficients& psi, double omega) {
    const Eigen::Index n = psi.psi.front().rows();
    Eigen::MatrixXcd response = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t h = 0; h < psi.psi.size(); ++h) {
        const std::complex<double> phase =
            std::polar(1.0, -omega * static_cast<double>(h));
        response += phase * psi.psi[h];
    }
    return response;
}

std::vector<SpectralSlice> spectral_gfevd(const VmaCoefficients& psi,
                                          const Eigen::MatrixXd& sigma,
                                          const std::vector<double>& grid) {
    const Eigen::Index n = sigma.rows();
    if ((sigma.diagonal().array() <= 0.0).any()) {
        throw std::invalid_argument("spectral_gfevd: sigma has a nonpositive diagonal entry");
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[j] < 0.0 || grid[j] > kPi || (j > 0 && grid[j] <= grid[j - 1])) {
            throw std::invalid_argument("spectral_gfevd: grid must increase within [0, pi]");
        }
    }
    const int h_count = static_cast<int>(psi.psi.size());
    const auto m = static_cast<Eigen::Index>(grid.size());

    // Evaluate all frequency responses at once: stack vec(Psi_h) into the
    // columns of P and multiply by the phase table, entry (h, j) =
    // exp(-i omega_j h), split into real and imaginary parts.
    Eigen::MatrixXd stacked(n * n, h_count);
    for (int h = 0; h < h_count; ++h) {
        stacked.col(h) = Eigen::Map<const Eigen::VectorXd>(
            psi.psi[static_cast<std::size_t>(h)].data(), n * n);
    }
    Eigen::MatrixXd phase_re(h_count, m), phase_im(h_count, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (int h = 0; h < h_count; ++h) {
            phase_re(h, j) = std::cos(grid[static_cast<std::size_t>(j)] * h);
            phase_im(h, j) = -std::sin(grid[static_cast<std::size_t>(j)] * h);
        }
    }
    const Eigen::MatrixXd responses_re = stacked * phase_re;
    const Eigen::MatrixXd responses_im = stacked * phase_im;

    const Eigen::ArrayXd inv_sigma_diag = sigma.diagonal().array().inverse();
    std::vector<SpectralSlice> slices(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Map<const Eigen::MatrixXd> re(responses_re.col(j).data(), n, n);
        const Eigen::Map<const Eigen::MatrixXd> im(responses_im.col(j).data(), n, n);
        const Eigen::MatrixXd ps_re = re * sigma;
        const Eigen::MatrixXd ps_im = im * sigma;
        SpectralSlice& slice = slices[static_cast<std::size_t>(j)];
        slice.omega = grid[static_cast<std::size_t>(j)];
        slice.numerator =
            ((ps_re.cwiseProduct(ps_re) + ps_im.cwiseProduct(ps_im)).array().rowwise() *
             inv_sigma_diag.transpose())
                .matrix();
        slice.denominator =
            (ps_re.cwiseProduct(re) + ps_im.cwiseProduct(im)).rowwise().sum();
    }
    return slices;
}

Eigen::MatrixXd within_frequency_theta(const SpectralSlice& slice) {
    const Eigen::MatrixXd theta =
        (slice.numerator.array().colwise() / slice.denominator.array()).matrix();
    return normalize_rows(theta);
}

std::vector<Eigen::MatrixXd> band_aggregate(const std::vector<SpectralSlice>& slices,
                                            const std::vector<FrequencyBand>& bands) {
    if (slices.empty()) {
        throw std::invalid_argument("band_aggregate: no spectral slices");
    }
    const Eigen::Index n = slices.front().numerator.rows();

    std::vector<Eigen::MatrixXd> sums(bands.size(), Eigen::MatrixXd::Zero(n, n));
    std::vector<int> counts(bands.size(), 0);
    Eigen::VectorXd whole_denominator = Eigen::VectorXd::Zero(n);
    for (const auto& slice : slices) {
        whole_denominator += slice.denominator;
        int hits = 0;
        for (std::size_t b = 0; b < bands.size(); ++b) {
            if (slice.omega > bands[b].lower && slice.omega <= bands[b].upper) {
                sums[b] += slice.numerator;
                ++counts[b];
                ++hits;
            }
        }
        if (hits != 1) {
            throw std::invalid_argument("band_aggregate: bands must partition the grid");
        }
    }
    for (std::size_t b = 0; b < bands.size(); ++b) {
        if (counts[b] == 0) {
            throw std::invalid_argument("band_aggregate: band '" + bands[b].label +
                                        "' contains no grid points");
        }
        if (counts[b] < 5) {
            throw std::invalid_argument("band_aggregate: band '" + bands[b].label +
                                        "' has fewer than five grid points");
        }
        sums[b] = (sums[b].array().colwise() / whole_denominator.array()).matrix();
    }
    return sums;
}

std::vector<ConnectednessTable> band_measures(const std::vector<Eigen::MatrixXd>& theta_bands,
                                              const std::vector<FrequencyBand>& bands,
                                              const Eigen::MatrixXd& theta_tilde_total,
                                              TciDenominator denominator) {
    if (theta_bands.size() != bands.size()) {
        throw std::invalid_argument("band_measures: band count mismatch");
    }
    const Eigen::Index n = theta_tilde_total.rows();
    Eigen::MatrixXd whole = Eigen::MatrixXd::Zero(n, n);
    for (const auto& band : theta_bands) {
        if (band.rows() != n || band.cols() != n) {
            throw std::invalid_argument("band_measures: band matrix dimension mismatch");
        }
        whole += band;
    }
    if ((whole.array() < 0.0).any()) {
        throw std::invalid_argument("band_measures: negative band aggregate");
    }
    // Each normalized total entry is split across bands in proportion to
    // that entry's spectral mass, so the bands sum back to the total table
    // exactly, including on windows with a heavy truncation tail.
    std::vector<ConnectednessTable> tables;
    tables.reserve(bands.size());
    for (std::size_t b = 0; b < bands.size(); ++b) {
        Eigen::MatrixXd theta(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                theta(i, j) = whole(i, j) > 0.0 ? theta_tilde_total(i, j) *
                                                      (theta_bands[b](i, j) / whole(i, j))
                                                : 0.0;
            }
        }
        ConnectednessTable table = measures(theta, denominator);
        table.band = bands[b].label;
        tables.push_back(std::move(table));
    }
    return tables;
}

}  // namespace qconn
