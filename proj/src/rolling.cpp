#include "qconn/rolling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qconn {

namespace {

void validate_config(const RollingConfig& config, Eigen::Index n) {
    std::ostringstream problems;
    if (config.window <= n * config.lag + 10) {
        problems << "window must exceed n*lag + 10; ";
    }
    if (config.step < 1) problems << "step must be >= 1; ";
    if (config.horizon < 1) problems << "horizon must be >= 1; ";
    if (config.h_trunc < config.horizon) problems << "h_trunc must cover the horizon; ";
    if (config.taus.empty()) problems << "no quantile levels; ";
    for (double tau : config.taus) {
        if (!(tau > 0.0 && tau < 1.0)) {
            problems << "tau " << tau << " outside (0,1); ";
            break;
        }
    }
    const std::string text = problems.str();
    if (!text.empty()) {
        throw std::invalid_argument("rolling_connectedness: " + text);
    }
}

void run_parallel(int n_tasks, int threads, const std::function<void(int)>& task) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n_tasks);
    if (threads <= 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
                task(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

RollingResult rolling_connectedness(const ReturnPanel& panel, const RollingConfig& config) {
    const Eigen::Index t = panel.values.rows();
    const Eigen::Index n = panel.values.cols();
    validate_config(config, n);
    if (t < config.window) {
        throw std::invalid_argument("rolling_connectedness: sample shorter than the window");
    }

    const int n_windows = static_cast<int>((t - config.window) / config.step) + 1;
    const int n_taus = static_cast<int>(config.taus.size());
    const int n_tasks = n_windows * n_taus;

    RollingResult result;
    result.labels = panel.labels;
    result.lag = config.lag;
    result.entries.resize(static_cast<std::size_t>(n_tasks));

    const std::vector<double> grid =
        config.include_frequency ? midpoint_grid(config.grid_size) : std::vector<double>{};

    run_parallel(n_tasks, config.threads, [&](int task_index) {
        const int w = task_index / n_taus;
        const int q = task_index % n_taus;
        const Eigen::Index end = config.window - 1 + static_cast<Eigen::Index>(w) * config.step;
        const double tau = config.taus[static_cast<std::size_t>(q)];

        DatedTables& entry = result.entries[static_cast<std::size_t>(task_index)];
        entry.date = panel.dates[static_cast<std::size_t>(end)];
        entry.tau = tau;
        try {
            const Eigen::MatrixXd window_values =
                panel.values.middleRows(end - config.window + 1, config.window);
            const QvarModel model = fit_qvar(window_values, config.lag, tau);
            const int h_trunc =
                config.include_frequency ? std::max(config.h_trunc, config.horizon)
                                         : config.horizon;
            const VmaCoefficients vma = vma_coefficients(model, h_trunc);
            const Eigen::MatrixXd theta_tilde =
                normalize_rows(gfevd(vma, model.sigma, config.horizon));

            ConnectednessTable total = measures(theta_tilde, config.tci_denominator);
            total.horizon = config.horizon;
            total.tau = tau;
            total.band = "total";
            entry.stable = model.stable;
            entry.tables.push_back(std::move(total));

            if (config.include_frequency) {
                const auto slices = spectral_gfevd(vma, model.sigma, grid);
                const auto band_raw = band_aggregate(slices, config.bands);
                auto band_tables = band_measures(band_raw, config.bands, theta_tilde,
                                                 config.tci_denominator);
                for (auto& table : band_tables) {
                    table.horizon = config.horizon;
                    table.tau = tau;
                    entry.tables.push_back(std::move(table));
                }
            }
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.error = e.what();
        }
    });
    return result;
}

DatedSeries extract_series(const RollingResult& result, double tau, const std::string& band,
                           int series_index) {
    DatedSeries series;
    std::vector<double> values;
    for (const auto& entry : result.entries) {
        if (!entry.ok || std::abs(entry.tau - tau) > 1e-12) continue;
        for (const auto& table : entry.tables) {
            if (table.band != band) continue;
            series.dates.push_back(entry.date);
            values.push_back(series_index < 0 ? table.tci : table.net(series_index));
        }
    }
    series.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                      static_cast<Eigen::Index>(values.size()));
    return series;
}

DatedSeries relative_tail_dependence(const DatedSeries& upper, const DatedSeries& lower) {
    if (upper.dates != lower.dates) {
        throw std::invalid_argument("relative_tail_dependence: date ranges differ");
    }
    DatedSeries out;
    out.dates = upper.dates;
    out.values = upper.values - lower.values;
    return out;
}

std::vector<double> default_tau_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(i * 0.05);
    return grid;
}

QuantileSurfaces quantile_surface(const ReturnPanel& panel, RollingConfig config,
                                  const std::vector<double>& tau_grid) {
    if (tau_grid.size() < 3) {
        throw std::invalid_argument("quantile_surface: need at least 3 quantile levels");
    }
    config.taus = tau_grid;
    const RollingResult rolled = rolling_connectedness(panel, config);

    QuantileSurfaces surfaces;
    surfaces.labels = rolled.labels;
    surfaces.bands.push_back("total");
    if (config.include_frequency) {
        for (const auto& band : config.bands) surfaces.bands.push_back(band.label);
    }

    const int n_taus = static_cast<int>(tau_grid.size());
    const int n_windows = static_cast<int>(rolled.entries.size()) / n_taus;
    const auto n = static_cast<Eigen::Index>(rolled.labels.size());

    std::vector<std::string> dates;
    dates.reserve(static_cast<std::size_t>(n_windows));
    for (int w = 0; w < n_windows; ++w) {
        dates.push_back(rolled.entries[static_cast<std::size_t>(w) * n_taus].date);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& band : surfaces.bands) {
        RollingSurface tci;
        tci.dates = dates;
        tci.taus = tau_grid;
        tci.values.setConstant(n_windows, n_taus, nan);
        std::vector<RollingSurface> net(static_cast<std::size_t>(n));
        for (auto& surface : net) {
            surface.dates = dates;
            surface.taus = tau_grid;
            surface.values.setConstant(n_windows, n_taus, nan);
        }
        for (int w = 0; w < n_windows; ++w) {
            for (int q = 0; q < n_taus; ++q) {
                const auto& entry = rolled.entries[static_cast<std::size_t>(w) * n_taus + q];
                if (!entry.ok) continue;
                for (const auto& table : entry.tables) {
                    if (table.band != band) continue;
                    tci.values(w, q) = table.tci;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        net[static_cast<std::size_t>(i)].values(w, q) = table.net(i);
                    }
                }
            }
        }
        surfaces.tci.push_back(std::move(tci));
        surfaces.net.push_back(std::move(net));
    }
    for (int w = 0; w < n_windows; ++w) {
        for (int q = 0; q < n_taus; ++q) {
            const auto& entry = rolled.entries[static_cast<std::size_t>(w) * n_taus + q];
            if (!entry.ok) {
                surfaces.flags.push_back({entry.date, entry.tau, entry.error});
            }
        }
    }
    return surfaces;
}

}  // namespace qconn
