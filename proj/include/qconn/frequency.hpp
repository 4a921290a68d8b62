#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qconn/connectedness.hpp"
#include "qconn/qvar.hpp"

namespace qconn {

/// Angular-frequency interval (lower, upper], upper <= pi.
struct FrequencyBand {
    std::string label;
    double lower = 0.0;
    double upper = 0.0;
};

/// The three conventional horizon bands: short (pi/5, pi] for 1-5 day
/// moves, medium (pi/20, pi/5] for 5-20 days, long (0, pi/20] beyond.
[[nodiscard]] std::vector<FrequencyBand> default_bands();

/// Midpoint grid on (0, pi): omega_j = pi * (j - 1/2) / size. Together
/// with its mirror image this is a uniform grid on the circle, so sums of
/// squared frequency responses over it reproduce the time-domain variance
/// sums exactly up to the truncation horizon.
[[nodiscard]] std::vector<double> midpoint_grid(int size);

/// Truncated frequency response Psi(e^{-i omega}) = sum_h Psi_h e^{-i omega h}.
[[nodiscard]] Eigen::MatrixXcd frequency_response(const VmaCoefficients& psi, double omega);

/// Unnormalized frequency-decomposition ingredients at one frequency:
/// numerator_ij = sigma_jj^{-1} |(Psi(e^{-iw}) Sigma)_ij|^2 and
/// denominator_i = (Psi(e^{-iw}) Sigma Psi^H(e^{-iw}))_ii.
struct SpectralSlice {
    double omega = 0.0;
    Eigen::MatrixXd numerator;
    Eigen::VectorXd denominator;
};

/// Evaluates slices over a strictly increasing grid in [0, pi]. Throws on
/// a nonpositive sigma diagonal.
[[nodiscard]] std::vector<SpectralSlice> spectral_gfevd(const VmaCoefficients& psi,
                                                        const Eigen::MatrixXd& sigma,
                                                        const std::vector<double>& grid);

/// Within-frequency decomposition (numerator over own denominator, then
/// row-normalized). Diagnostic only; band tables use band_aggregate.
[[nodiscard]] Eigen::MatrixXd within_frequency_theta(const SpectralSlice& slice);

/// Sums slice numerators over each band and divides by the whole-grid
/// denominator sums, so band matrices add up exactly to the whole-range
/// decomposition. Bands must tile the grid: every grid point in exactly
/// one band, at least five points per band.
[[nodiscard]] std::vector<Eigen::MatrixXd> band_aggregate(
    const std::vector<SpectralSlice>& slices, const std::vector<FrequencyBand>& bands);

/// Connectedness tables per band. Each entry of the time-domain table
/// theta_tilde_total is split across bands in proportion to its spectral
/// mass from the band aggregates, so every measure is additive across
/// bands to its time-domain counterpart exactly, and a single whole-range
/// band reproduces the time-domain tables.
[[nodiscard]] std::vector<ConnectednessTable> band_measures(
    const std::vector<Eigen::MatrixXd>& theta_bands, const std::vector<FrequencyBand>& bands,
    const Eigen::MatrixXd& theta_tilde_total,
    TciDenominator denominator = TciDenominator::NodeCount);

}  // namespace qconn
