#pragma once

#include <map>
#include <string>
#include <vector>

#include "qconn/connectedness.hpp"
#include "qconn/portfolio.hpp"
#include "qconn/rolling.hpp"
#include "qconn/stats.hpp"

namespace qconn::io {

/// Summary-table CSV: one row per series with moment and test columns.
void write_summary_csv(const std::string& path, const std::vector<std::string>& labels,
                       const std::vector<stats::SeriesSummary>& summaries);

/// Square labeled matrix (theta, NPDC, Kendall tau, PCI, ...).
void write_matrix_csv(const std::string& path, const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& matrix);

/// Significance mask as 0/1 cells.
void write_mask_csv(const std::string& path, const std::vector<std::string>& labels,
                    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask);

/// Static connectedness tables in long format:
/// tau,band,series,measure,value with TO/FROM/NET rows per series and a
/// TCI row with series "ALL". Optionally NPDC rows keyed "source>target".
void write_static_tables_csv(const std::string& path,
                             const std::vector<ConnectednessTable>& tables,
                             const std::vector<std::string>& labels, bool include_npdc);

/// Rolling output in the long schema date,tau,band,series,measure,value.
void write_rolling_csv(const std::string& path, const RollingResult& result,
                       bool include_npdc);

/// Flagged windows of a rolling run: date,tau,error.
void write_flags_csv(const std::string& path, const RollingResult& result);

/// Two-column dated series.
void write_series_csv(const std::string& path, const DatedSeries& series,
                      const std::string& value_name);

/// Quantile surfaces in the long schema (series "ALL" for TCI rows).
void write_surfaces_csv(const std::string& path, const QuantileSurfaces& surfaces);

/// Weight path as date x asset CSV.
void write_weights_csv(const std::string& path, const WeightPath& path_data,
                       const std::vector<std::string>& labels);

/// Weight distribution and hedging table: one row per asset with mean,
/// std. dev., 5% and 95% weight quantiles, HE, and its p-value.
void write_weight_stats_csv(const std::string& path, const std::vector<std::string>& labels,
                            const WeightPath& weights, const PerformanceReport& report);

/// Performance rows (Return, StdDev, three Sharpe variants) by column.
/// Columns are strategy names; panels (full/pre/post) stack vertically.
struct PerformancePanel {
    std::string name;
    std::vector<std::string> strategies;
    std::vector<PerformanceReport> reports;
};
void write_performance_csv(const std::string& path,
                           const std::vector<PerformancePanel>& panels);

/// Cumulative realized returns per strategy: date plus one column each.
void write_cumulative_csv(const std::string& path, const std::vector<std::string>& dates,
                          const std::vector<std::string>& strategies,
                          const std::vector<Eigen::VectorXd>& cumulative);

/// Directed spillover graph built from a decomposition table. An ordered
/// pair with NPDC_ij > threshold becomes an edge from series j to series i
/// (the dominant transmitter points at the receiver); nodes carry NET.
struct NetworkExport {
    struct Edge {
        std::string source;
        std::string target;
        double weight;  ///< NPDC in percent
    };
    struct Node {
        std::string label;
        double net;
    };
    std::vector<Edge> edges;
    std::vector<Node> nodes;
};

[[nodiscard]] NetworkExport build_network(const ConnectednessTable& table,
                                          const std::vector<std::string>& labels,
                                          double min_edge_weight = 0.0);

void write_network_csv(const std::string& edges_path, const std::string& nodes_path,
                       const NetworkExport& network);

void write_network_json(const std::string& path, const NetworkExport& network);

/// Every switch that shaped a run, written as JSON so a run can be
/// reproduced from its metadata and input alone.
void write_metadata_json(const std::string& path,
                         const std::map<std::string, std::string>& entries);

}  // namespace qconn::io
