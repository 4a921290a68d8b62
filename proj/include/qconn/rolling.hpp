#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qconn/frequency.hpp"
#include "qconn/panel.hpp"

namespace qconn {

/// Rolling-estimation setup. Defaults follow the usual daily convention:
/// 200-observation window, 20-step horizon, lag 1, quantiles
/// {0.05, 0.50, 0.95}, and the three standard frequency bands.
struct RollingConfig {
    int window = 200;
    int horizon = 20;
    int lag = 1;
    std::vector<double> taus{0.05, 0.5, 0.95};
    std::vector<FrequencyBand> bands = default_bands();
    int step = 1;
    int grid_size = 500;  ///< frequency grid points on (0, pi)
    int h_trunc = 100;    ///< moving-average truncation for Fourier sums
    TciDenominator tci_denominator = TciDenominator::NodeCount;
    int threads = 0;  ///< 0 = hardware concurrency
    bool include_frequency = true;
};

/// Connectedness tables for one window end and quantile: the time-domain
/// table first ("total"), then one per band. Estimation failures carry
/// ok = false and an error string instead of being interpolated over.
struct DatedTables {
    std::string date;
    double tau = 0.5;
    bool ok = false;
    bool stable = true;  ///< companion spectral radius < 1 in this window
    std::string error;
    std::vector<ConnectednessTable> tables;
};

struct RollingResult {
    std::vector<std::string> labels;
    std::vector<DatedTables> entries;  ///< ordered by (window end, tau)
    int lag = 1;
};

/// Runs the full rolling pipeline: for every window end (stride step) and
/// every tau, fit a QVAR, decompose, and tabulate. Window failures are
/// flagged entries; the run continues.
[[nodiscard]] RollingResult rolling_connectedness(const ReturnPanel& panel,
                                                  const RollingConfig& config);

/// A dated scalar series.
struct DatedSeries {
    std::vector<std::string> dates;
    Eigen::VectorXd values;
};

/// Extracts one measure series from a rolling result. series_index < 0
/// selects the TCI; otherwise NET of that series. Skips flagged entries.
[[nodiscard]] DatedSeries extract_series(const RollingResult& result, double tau,
                                         const std::string& band, int series_index);

/// Pointwise difference upper - lower. Dates must match exactly.
[[nodiscard]] DatedSeries relative_tail_dependence(const DatedSeries& upper,
                                                   const DatedSeries& lower);

/// Window-end-by-quantile grid of one measure. Cells of failed windows are
/// NaN and listed in flags.
struct RollingSurface {
    std::vector<std::string> dates;
    std::vector<double> taus;
    Eigen::MatrixXd values;  ///< dates x taus, percent
};

struct SurfaceFlag {
    std::string date;
    double tau = 0.0;
    std::string error;
};

struct QuantileSurfaces {
    std::vector<std::string> bands;                       ///< "total" + band labels
    std::vector<RollingSurface> tci;                      ///< one per band entry
    std::vector<std::vector<RollingSurface>> net;         ///< [band][series]
    std::vector<SurfaceFlag> flags;
    std::vector<std::string> labels;
};

/// Default grid for quantile-sensitivity surfaces: 0.05..0.95 step 0.05.
[[nodiscard]] std::vector<double> default_tau_grid();

/// Rolling surfaces over a tau grid (>= 3 levels) for TCI and per-series
/// NET, per band.
[[nodiscard]] QuantileSurfaces quantile_surface(const ReturnPanel& panel, RollingConfig config,
                                                const std::vector<double>& tau_grid);

}  // namespace qconn
