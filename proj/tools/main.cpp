// qconn: quantile connectedness toolkit for multivariate return panels.
//
// Subcommands cover the full pipeline: ingest raw prices, descriptive
// statistics, static and rolling quantile-VAR connectedness in the time
// and frequency domains, connectedness-aware portfolios, structural-break
// tests, spillover network exports, and seeded synthetic data.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qconn/breaks.hpp"
#include "qconn/connectedness.hpp"
#include "qconn/csv.hpp"
#include "qconn/frequency.hpp"
#include "qconn/io.hpp"
#include "qconn/panel.hpp"
#include "qconn/portfolio.hpp"
#include "qconn/qvar.hpp"
#include "qconn/rolling.hpp"
#include "qconn/simulate.hpp"
#include "qconn/stats.hpp"

namespace {

using namespace qconn;

struct CliConfig {
    std::string input;
    std::string output_dir = ".";
    std::string date_column = "date";
    std::string break_date;
    int window = 200;
    int horizon = 20;
    std::string lag_policy = "fixed";  // fixed | bic
    int lag = 1;
    int p_max = 8;
    std::string bic_variant = "gaussian";  // gaussian | checkloss
    std::vector<double> taus{0.05, 0.5, 0.95};
    std::vector<double> tau_grid;
    std::string tci_denominator = "n";  // n | n-1
    int step = 1;
    int grid_size = 500;
    int h_trunc = 100;
    int threads = 0;
    double alpha = 0.05;
    double tau = 0.5;  // portfolio quantile
    std::uint64_t seed = 12345;
    double min_edge_weight = 0.0;
    bool include_npdc = false;
    bool surface = false;
    std::vector<std::string> strategies{"mvp", "mcp", "mcop"};
    // simulate
    std::string dgp = "var1";
    int sim_n = 3;
    int sim_t = 400;
    bool sim_prices = false;
    // export-network
    std::string table_file;
    std::string measure_file;
    bool json_output = false;
};

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += csv::format_double(values[i]);
    }
    return out;
}

std::string format_tau(double tau) {
    std::ostringstream out;
    out << tau;
    return out.str();
}

TciDenominator parse_denominator(const std::string& text) {
    return text == "n-1" ? TciDenominator::NodeCountMinusOne : TciDenominator::NodeCount;
}

std::vector<std::string> validate(const CliConfig& cfg, bool needs_input) {
    std::vector<std::string> problems;
    if (needs_input && cfg.input.empty()) problems.push_back("--input is required");
    if (cfg.window < 20) problems.push_back("--window must be at least 20");
    if (cfg.horizon < 1) problems.push_back("--horizon must be at least 1");
    if (cfg.step < 1) problems.push_back("--step must be at least 1");
    if (cfg.lag < 1) problems.push_back("--lag must be at least 1");
    if (cfg.p_max < 1) problems.push_back("--p-max must be at least 1");
    if (cfg.grid_size < 25) problems.push_back("--grid-size must be at least 25");
    if (cfg.h_trunc < cfg.horizon) problems.push_back("--h-trunc must cover the horizon");
    if (cfg.lag_policy != "fixed" && cfg.lag_policy != "bic") {
        problems.push_back("--lag-policy must be 'fixed' or 'bic'");
    }
    if (cfg.bic_variant != "gaussian" && cfg.bic_variant != "checkloss") {
        problems.push_back("--bic-variant must be 'gaussian' or 'checkloss'");
    }
    if (cfg.tci_denominator != "n" && cfg.tci_denominator != "n-1") {
        problems.push_back("--tci-denominator must be 'n' or 'n-1'");
    }
    if (cfg.taus.empty()) problems.push_back("--taus must not be empty");
    for (double tau : cfg.taus) {
        if (!(tau > 0.0 && tau < 1.0)) {
            problems.push_back("--taus entries must lie strictly inside (0,1)");
            break;
        }
    }
    for (double tau : cfg.tau_grid) {
        if (!(tau > 0.0 && tau < 1.0)) {
            problems.push_back("--tau-grid entries must lie strictly inside (0,1)");
            break;
        }
    }
    if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
        problems.push_back("--tau must lie strictly inside (0,1)");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        problems.push_back("--alpha must lie strictly inside (0,1)");
    }
    if (!cfg.break_date.empty() && !is_iso_date(cfg.break_date)) {
        problems.push_back("--break-date must be an ISO date (YYYY-MM-DD)");
    }
    for (const auto& strategy : cfg.strategies) {
        if (strategy != "mvp" && strategy != "mcp" && strategy != "mcop") {
            problems.push_back("--strategies entries must be mvp, mcp, or mcop");
            break;
        }
    }
    return problems;
}

RollingConfig rolling_config(const CliConfig& cfg, int lag) {
    RollingConfig config;
    config.window = cfg.window;
    config.horizon = cfg.horizon;
    config.lag = lag;
    config.taus = cfg.taus;
    config.step = cfg.step;
    config.grid_size = cfg.grid_size;
    config.h_trunc = cfg.h_trunc;
    config.tci_denominator = parse_denominator(cfg.tci_denominator);
    config.threads = cfg.threads;
    return config;
}

std::map<std::string, std::string> base_metadata(const CliConfig& cfg,
                                                 const std::string& command, int lag_used) {
    std::map<std::string, std::string> meta;
    meta["command"] = command;
    meta["input"] = cfg.input;
    meta["date_column"] = cfg.date_column;
    meta["break_date"] = cfg.break_date;
    meta["window"] = std::to_string(cfg.window);
    meta["horizon"] = std::to_string(cfg.horizon);
    meta["lag_policy"] = cfg.lag_policy;
    meta["lag_used"] = std::to_string(lag_used);
    meta["p_max"] = std::to_string(cfg.p_max);
    meta["bic_variant"] = cfg.bic_variant;
    meta["taus"] = join_doubles(cfg.taus);
    meta["tau_grid"] = join_doubles(cfg.tau_grid.empty() && cfg.surface
                                        ? default_tau_grid()
                                        : cfg.tau_grid);
    meta["tci_denominator"] = cfg.tci_denominator;
    meta["step"] = std::to_string(cfg.step);
    meta["frequency_grid_size"] = std::to_string(cfg.grid_size);
    meta["vma_truncation"] = std::to_string(cfg.h_trunc);
    meta["threads"] = std::to_string(cfg.threads);
    meta["seed"] = std::to_string(cfg.seed);
    meta["alpha"] = csv::format_double(cfg.alpha);
    meta["portfolio_tau"] = csv::format_double(cfg.tau);
    meta["min_edge_weight"] = csv::format_double(cfg.min_edge_weight);
    meta["include_npdc"] = cfg.include_npdc ? "true" : "false";
    // fixed methodology switches, recorded so runs are self-describing
    meta["bands"] = "short=(pi/5,pi],medium=(pi/20,pi/5],long=(0,pi/20]";
    meta["band_normalization"] = "whole-range row sums (additive bands)";
    meta["frequency_grid"] = "midpoint grid on (0,pi)";
    meta["sigma_estimator"] = "centered residual covariance, denominator T-p";
    meta["bic_sample"] = "common sample trimmed to p_max";
    meta["he_test"] = "two-sample F test on the variance ratio";
    meta["quantile_convention"] = "interpolated order statistic at (T-1)*alpha";
    meta["long_only_projection"] = "clip negatives to zero and renormalize";
    meta["solver"] = "interior-point pinball LP, gap tolerance 1e-8, max 200 iterations";
    return meta;
}

int resolve_lag(const CliConfig& cfg, const ReturnPanel& panel) {
    if (cfg.lag_policy == "bic") {
        const BicVariant variant = cfg.bic_variant == "checkloss" ? BicVariant::CheckLoss
                                                                  : BicVariant::Gaussian;
        return select_lag_bic(panel, cfg.p_max, variant, cfg.tau);
    }
    return cfg.lag;
}

std::filesystem::path out_path(const CliConfig& cfg, const std::string& name) {
    return std::filesystem::path(cfg.output_dir) / name;
}

void prepare_output_dir(const CliConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
}

// ---------------------------------------------------------------------------
// subcommand bodies

int run_ingest(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    const PricePanel raw = load_price_csv(cfg.input, cfg.date_column);
    const PricePanel cleaned = clean(raw);
    const ReturnPanel returns = log_returns(cleaned);
    write_panel_csv(out_path(cfg, "cleaned_prices.csv").string(), cleaned.dates,
                    cleaned.labels, cleaned.values);
    write_panel_csv(out_path(cfg, "returns.csv").string(), returns.dates, returns.labels,
                    returns.values);
    if (!cfg.break_date.empty()) {
        const auto [pre, post] = split(returns, cfg.break_date);
        write_panel_csv(out_path(cfg, "returns_pre.csv").string(), pre.dates, pre.labels,
                        pre.values);
        write_panel_csv(out_path(cfg, "returns_post.csv").string(), post.dates, post.labels,
                        post.values);
    }
    auto meta = base_metadata(cfg, "ingest", cfg.lag);
    meta["rows"] = std::to_string(returns.values.rows());
    meta["series"] = std::to_string(returns.values.cols());
    io::write_metadata_json(out_path(cfg, "metadata.json").string(), meta);
    return 0;
}

int run_stats(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    const ReturnPanel panel = load_return_csv(cfg.input, cfg.date_column);
    std::vector<stats::SeriesSummary> summaries;
    summaries.reserve(panel.labels.size());
    for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
        const std::span<const double> column(panel.values.col(j).data(),
                                             static_cast<std::size_t>(panel.values.rows()));
        summaries.push_back(stats::summarize(column));
    }
    io::write_summary_csv(out_path(cfg, "summary.csv").string(), panel.labels, summaries);
    const auto corr = stats::correlation_matrix(panel, cfg.alpha);
    io::write_matrix_csv(out_path(cfg, "kendall_tau.csv").string(), panel.labels, corr.tau);
    io::write_mask_csv(out_path(cfg, "kendall_mask.csv").string(), panel.labels,
                       corr.significant);
    io::write_metadata_json(out_path(cfg, "metadata.json").string(),
                            base_metadata(cfg, "stats", cfg.lag));
    return 0;
}

int run_connectedness(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    const ReturnPanel panel = load_return_csv(cfg.input, cfg.date_column);
    const int lag = resolve_lag(cfg, panel);
    const TciDenominator den = parse_denominator(cfg.tci_denominator);
    const auto bands = default_bands();
    const auto grid = midpoint_grid(cfg.grid_size);

    std::vector<ConnectednessTable> all_tables;
    bool any_unstable = false;
    for (double tau : cfg.taus) {
        const QvarModel model = fit_qvar(panel, lag, tau, {}, std::max(cfg.threads, 1));
        any_unstable = any_unstable || !model.stable;
        const VmaCoefficients vma =
            vma_coefficients(model, std::max(cfg.h_trunc, cfg.horizon));
        const Eigen::MatrixXd theta_tilde =
            normalize_rows(gfevd(vma, model.sigma, cfg.horizon));
        ConnectednessTable total = measures(theta_tilde, den);
        total.horizon = cfg.horizon;
        total.tau = tau;
        io::write_matrix_csv(out_path(cfg, "theta_tau" + format_tau(tau) + ".csv").string(),
                             panel.labels, theta_tilde);
        io::write_matrix_csv(out_path(cfg, "npdc_tau" + format_tau(tau) + ".csv").string(),
                             panel.labels, total.npdc);
        all_tables.push_back(total);

        const auto slices = spectral_gfevd(vma, model.sigma, grid);
        auto band_tables = band_measures(band_aggregate(slices, bands), bands, theta_tilde, den);
        for (auto& table : band_tables) {
            table.horizon = cfg.horizon;
            table.tau = tau;
            all_tables.push_back(std::move(table));
        }
    }
    io::write_static_tables_csv(out_path(cfg, "measures.csv").string(), all_tables,
                                panel.labels, cfg.include_npdc);
    auto meta = base_metadata(cfg, "connectedness", lag);
    meta["unstable_fit"] = any_unstable ? "true" : "false";
    io::write_metadata_json(out_path(cfg, "metadata.json").string(), meta);
    return 0;
}

int run_rolling(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    const ReturnPanel panel = load_return_csv(cfg.input, cfg.date_column);
    const int lag = resolve_lag(cfg, panel);
    const RollingConfig config = rolling_config(cfg, lag);

    if (cfg.surface) {
        const std::vector<double> grid =
            cfg.tau_grid.empty() ? default_tau_grid() : cfg.tau_grid;
        const QuantileSurfaces surfaces = quantile_surface(panel, config, grid);
        io::write_surfaces_csv(out_path(cfg, "surface.csv").string(), surfaces);
        if (!surfaces.flags.empty()) {
            csv::Table flags;
            flags.header = {"date", "tau", "error"};
            for (const auto& flag : surfaces.flags) {
                flags.rows.push_back({flag.date, csv::format_double(flag.tau), flag.error});
            }
            csv::write_file(out_path(cfg, "surface_flags.csv").string(), flags);
        }
    }

    const RollingResult result = rolling_connectedness(panel, config);
    io::write_rolling_csv(out_path(cfg, "rolling.csv").string(), result, cfg.include_npdc);
    io::write_flags_csv(out_path(cfg, "rolling_flags.csv").string(), result);

    const bool has_tails =
        std::count_if(cfg.taus.begin(), cfg.taus.end(),
                      [](double t) { return std::abs(t - 0.05) < 1e-12; }) > 0 &&
        std::count_if(cfg.taus.begin(), cfg.taus.end(),
                      [](double t) { return std::abs(t - 0.95) < 1e-12; }) > 0;
    if (has_tails) {
        const DatedSeries upper = extract_series(result, 0.95, "total", -1);
        const DatedSeries lower = extract_series(result, 0.05, "total", -1);
        if (upper.dates == lower.dates) {
            io::write_series_csv(out_path(cfg, "rtd.csv").string(),
                                 relative_tail_dependence(upper, lower), "tci_95_minus_05");
        }
    }
    io::write_metadata_json(out_path(cfg, "metadata.json").string(),
                            base_metadata(cfg, "rolling", lag));
    return 0;
}

int run_portfolio(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    const ReturnPanel panel = load_return_csv(cfg.input, cfg.date_column);
    const int lag = resolve_lag(cfg, panel);
    RollingConfig config = rolling_config(cfg, lag);
    config.include_frequency = false;

    const std::optional<std::string> break_date =
        cfg.break_date.empty() ? std::nullopt : std::optional<std::string>(cfg.break_date);

    std::vector<std::string> names;
    std::vector<BacktestResult> results;
    for (const auto& name : cfg.strategies) {
        const Strategy strategy = name == "mvp"   ? Strategy::Mvp
                                  : name == "mcp" ? Strategy::Mcp
                                                  : Strategy::Mcop;
        results.push_back(backtest(panel, strategy, cfg.tau, config, break_date));
        names.push_back(name);
        const auto& result = results.back();
        io::write_weights_csv(out_path(cfg, "weights_" + name + ".csv").string(), result.path,
                              panel.labels);
        io::write_weight_stats_csv(out_path(cfg, "weight_stats_" + name + ".csv").string(),
                                   panel.labels, result.path, result.full);
        for (const auto& flag : result.flags) {
            std::cerr << "portfolio " << name << ": skipped window " << flag << "\n";
        }
    }

    std::vector<io::PerformancePanel> panels;
    io::PerformancePanel full{"full", names, {}};
    for (const auto& result : results) full.reports.push_back(result.full);
    panels.push_back(std::move(full));
    if (break_date) {
        io::PerformancePanel pre{"pre_break", names, {}};
        io::PerformancePanel post{"post_break", names, {}};
        bool has_pre = true, has_post = true;
        for (const auto& result : results) {
            has_pre = has_pre && result.pre.has_value();
            has_post = has_post && result.post.has_value();
        }
        if (has_pre) {
            for (const auto& result : results) pre.reports.push_back(*result.pre);
            panels.push_back(std::move(pre));
        }
        if (has_post) {
            for (const auto& result : results) post.reports.push_back(*result.post);
            panels.push_back(std::move(post));
        }
    }
    io::write_performance_csv(out_path(cfg, "performance.csv").string(), panels);

    // cumulative paths share dates only if no strategy skipped early windows
    bool aligned = true;
    for (const auto& result : results) {
        aligned = aligned && result.realized_dates == results.front().realized_dates;
    }
    if (aligned && !results.empty()) {
        std::vector<Eigen::VectorXd> cumulative;
        for (const auto& result : results) cumulative.push_back(result.full.cumulative);
        io::write_cumulative_csv(out_path(cfg, "cumulative.csv").string(),
                                 results.front().realized_dates, names, cumulative);
    }
    io::write_metadata_json(out_path(cfg, "metadata.json").string(),
                            base_metadata(cfg, "portfolio", lag));
    return 0;
}

int run_breaks(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    if (cfg.measure_file.empty() || cfg.break_date.empty()) {
        std::cerr << "breaks: --measure-file and --break-date are required\n";
        return 2;
    }
    const csv::Table table = csv::read_file(cfg.measure_file);
    // expected long schema: date,tau,band,series,measure,value
    if (table.header.size() < 6) {
        std::cerr << "breaks: measure file must follow date,tau,band,series,measure,value\n";
        return 2;
    }
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<double>>> by_tau;
    for (const auto& row : table.rows) {
        if (row[4] != "TCI" || row[2] != "total") continue;
        by_tau[row[1]].first.push_back(row[0]);
        by_tau[row[1]].second.push_back(csv::parse_double(row[5]));
    }
    if (by_tau.empty()) {
        std::cerr << "breaks: no total-band TCI rows found in " << cfg.measure_file << "\n";
        return 1;
    }
    csv::Table out;
    out.header = {"tau", "test", "statistic", "pvalue", "break_date"};
    for (const auto& [tau, series] : by_tau) {
        const auto& [dates, values] = series;
        const Eigen::Map<const Eigen::VectorXd> vec(values.data(),
                                                    static_cast<Eigen::Index>(values.size()));
        const BreakTestResult chow = chow_test(dates, vec, cfg.break_date);
        out.rows.push_back({tau, "chow", csv::format_double(chow.statistic),
                            csv::format_double(chow.pvalue), cfg.break_date});
        Eigen::Index cut = 0;
        while (cut < vec.size() && dates[static_cast<std::size_t>(cut)] < cfg.break_date) {
            ++cut;
        }
        const BreakTestResult wilcoxon =
            wilcoxon_rank_sum(vec.head(cut), vec.tail(vec.size() - cut));
        out.rows.push_back({tau, "wilcoxon", csv::format_double(wilcoxon.statistic),
                            csv::format_double(wilcoxon.pvalue), cfg.break_date});
    }
    csv::write_file(out_path(cfg, "breaks.csv").string(), out);
    io::write_metadata_json(out_path(cfg, "metadata.json").string(),
                            base_metadata(cfg, "breaks", cfg.lag));
    return 0;
}

int run_export_network(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    if (cfg.table_file.empty()) {
        std::cerr << "export-network: --table (a theta matrix CSV) is required\n";
        return 2;
    }
    const csv::Table raw = csv::read_file(cfg.table_file);
    const std::vector<std::string> labels(raw.header.begin() + 1, raw.header.end());
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd theta(n, n);
    if (static_cast<Eigen::Index>(raw.rows.size()) != n) {
        std::cerr << "export-network: matrix CSV must be square\n";
        return 2;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            theta(i, j) = csv::parse_double(raw.rows[static_cast<std::size_t>(i)]
                                                    [static_cast<std::size_t>(j) + 1]);
        }
    }
    const ConnectednessTable table =
        measures(theta, parse_denominator(cfg.tci_denominator));
    const io::NetworkExport network = io::build_network(table, labels, cfg.min_edge_weight);
    if (cfg.json_output) {
        io::write_network_json(out_path(cfg, "network.json").string(), network);
    } else {
        io::write_network_csv(out_path(cfg, "edges.csv").string(),
                              out_path(cfg, "nodes.csv").string(), network);
    }
    io::write_metadata_json(out_path(cfg, "metadata.json").string(),
                            base_metadata(cfg, "export-network", cfg.lag));
    return 0;
}

int run_simulate(const CliConfig& cfg) {
    prepare_output_dir(cfg);
    sim::Rng rng(cfg.seed);
    Eigen::MatrixXd values;
    if (cfg.dgp == "noise") {
        values = 0.01 * sim::iid_gaussian(cfg.sim_t, cfg.sim_n, rng);
    } else if (cfg.dgp == "factor") {
        values = 0.01 * sim::common_factor_heavy_tail(cfg.sim_t, cfg.sim_n, 0.8, 3, rng);
    } else if (cfg.dgp == "var1") {
        Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(cfg.sim_n, cfg.sim_n);
        for (int i = 0; i < cfg.sim_n; ++i) {
            phi(i, i) = 0.25;
            phi(i, (i + 1) % cfg.sim_n) = 0.15;
        }
        values = 0.01 * sim::var1_gaussian(cfg.sim_t, phi,
                                           Eigen::MatrixXd::Identity(cfg.sim_n, cfg.sim_n), rng);
    } else {
        std::cerr << "simulate: unknown --dgp '" << cfg.dgp
                  << "' (expected var1, factor, or noise)\n";
        return 2;
    }
    if (cfg.sim_prices) {
        const Eigen::MatrixXd prices = sim::prices_from_returns(values);
        const PricePanel panel = sim::make_price_panel(prices);
        write_panel_csv(out_path(cfg, "prices.csv").string(), panel.dates, panel.labels,
                        panel.values);
    } else {
        const ReturnPanel panel = sim::make_return_panel(values);
        write_panel_csv(out_path(cfg, "returns.csv").string(), panel.dates, panel.labels,
                        panel.values);
    }
    auto meta = base_metadata(cfg, "simulate", cfg.lag);
    meta["dgp"] = cfg.dgp;
    meta["sim_n"] = std::to_string(cfg.sim_n);
    meta["sim_t"] = std::to_string(cfg.sim_t);
    io::write_metadata_json(out_path(cfg, "metadata.json").string(), meta);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig cfg;
    CLI::App app{"quantile connectedness toolkit for return panels"};
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    app.add_option("--input", cfg.input, "input CSV (prices or returns)");
    app.add_option("--output-dir", cfg.output_dir, "directory for output files");
    app.add_option("--date-column", cfg.date_column, "name of the date column");
    app.add_option("--break-date", cfg.break_date, "sample split date (YYYY-MM-DD)");
    app.add_option("--window", cfg.window, "rolling window length");
    app.add_option("--horizon", cfg.horizon, "forecast horizon for the decomposition");
    app.add_option("--lag-policy", cfg.lag_policy, "fixed | bic");
    app.add_option("--lag", cfg.lag, "VAR lag order when --lag-policy=fixed");
    app.add_option("--p-max", cfg.p_max, "largest lag considered by BIC");
    app.add_option("--bic-variant", cfg.bic_variant, "gaussian | checkloss");
    app.add_option("--taus", cfg.taus, "quantile levels")->delimiter(',');
    app.add_option("--tau-grid", cfg.tau_grid, "quantile grid for surfaces")->delimiter(',');
    app.add_option("--tci-denominator", cfg.tci_denominator, "n | n-1");
    app.add_option("--step", cfg.step, "window stride");
    app.add_option("--grid-size", cfg.grid_size, "frequency grid points");
    app.add_option("--h-trunc", cfg.h_trunc, "moving-average truncation");
    app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    app.add_option("--alpha", cfg.alpha, "significance level / tail level");
    app.add_option("--tau", cfg.tau, "quantile for connectedness portfolios");
    app.add_option("--seed", cfg.seed, "seed for stochastic subcommands");
    app.add_option("--min-edge-weight", cfg.min_edge_weight, "network edge threshold");
    app.add_flag("--npdc", cfg.include_npdc, "include pairwise NPDC rows in long outputs");

    auto* ingest = app.add_subcommand("ingest", "load, clean, and difference a price panel");
    auto* stats_cmd = app.add_subcommand("stats", "summary statistics and rank correlations");
    auto* connectedness =
        app.add_subcommand("connectedness", "full-sample connectedness tables");
    auto* rolling = app.add_subcommand("rolling", "rolling-window dynamics");
    rolling->add_flag("--surface", cfg.surface, "also write quantile-sensitivity surfaces");
    auto* portfolio = app.add_subcommand("portfolio", "backtest allocation rules");
    portfolio->add_option("--strategies", cfg.strategies, "subset of mvp,mcp,mcop")
        ->delimiter(',');
    auto* breaks_cmd = app.add_subcommand("breaks", "structural-break tests on a measure CSV");
    breaks_cmd->add_option("--measure-file", cfg.measure_file,
                           "long-format CSV from the rolling command");
    auto* network = app.add_subcommand("export-network", "spillover graph from a theta CSV");
    network->add_option("--table", cfg.table_file, "square theta matrix CSV");
    network->add_flag("--json", cfg.json_output, "write one JSON file instead of CSVs");
    auto* simulate = app.add_subcommand("simulate", "write seeded synthetic data");
    simulate->add_option("--dgp", cfg.dgp, "var1 | factor | noise");
    simulate->add_option("--n", cfg.sim_n, "number of series");
    simulate->add_option("--t-obs", cfg.sim_t, "number of observations");
    simulate->add_flag("--prices", cfg.sim_prices, "emit price levels instead of returns");

    CLI11_PARSE(app, argc, argv);

    const bool needs_input = ingest->parsed() || stats_cmd->parsed() ||
                             connectedness->parsed() || rolling->parsed() ||
                             portfolio->parsed();
    const auto problems = validate(cfg, needs_input);
    if (!problems.empty()) {
        std::cerr << "configuration errors:\n";
        for (const auto& problem : problems) std::cerr << "  - " << problem << "\n";
        return 2;
    }

    try {
        if (ingest->parsed()) return run_ingest(cfg);
        if (stats_cmd->parsed()) return run_stats(cfg);
        if (connectedness->parsed()) return run_connectedness(cfg);
        if (rolling->parsed()) return run_rolling(cfg);
        if (portfolio->parsed()) return run_portfolio(cfg);
        if (breaks_cmd->parsed()) return run_breaks(cfg);
        if (network->parsed()) return run_export_network(cfg);
        if (simulate->parsed()) return run_simulate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
