#include "qconn/io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qconn/csv.hpp"

namespace qconn::io {

namespace {

using csv::format_double;

std::string format_cell(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

void append_measure_rows(csv::Table& table, const std::vector<std::string>& prefix,
                         const ConnectednessTable& ct, const std::vector<std::string>& labels,
                         bool include_npdc) {
    const Eigen::Index n = ct.to.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& label = labels[static_cast<std::size_t>(i)];
        for (const auto& [measure, value] :
             {std::pair<const char*, double>{"TO", ct.to(i)},
              {"FROM", ct.from(i)},
              {"NET", ct.net(i)}}) {
            auto row = prefix;
            row.insert(row.end(), {label, measure, format_double(value)});
            table.rows.push_back(std::move(row));
        }
    }
    auto tci_row = prefix;
    tci_row.insert(tci_row.end(), {"ALL", "TCI", format_double(ct.tci)});
    table.rows.push_back(std::move(tci_row));
    if (include_npdc) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                auto row = prefix;
                row.insert(row.end(),
                           {labels[static_cast<std::size_t>(i)] + ">" +
                                labels[static_cast<std::size_t>(j)],
                            "NPDC", format_double(ct.npdc(i, j))});
                table.rows.push_back(std::move(row));
            }
        }
    }
}

}  // namespace

void write_summary_csv(const std::string& path, const std::vector<std::string>& labels,
                       const std::vector<stats::SeriesSummary>& summaries) {
    csv::Table table;
    table.header = {"series",   "mean",      "std_dev",   "skewness", "excess_kurtosis",
                    "jb_stat",  "jb_pvalue", "adf_stat",  "adf_pvalue"};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& s = summaries[i];
        table.rows.push_back({labels[i], format_double(s.mean), format_double(s.std_dev),
                              format_cell(s.skewness), format_cell(s.excess_kurtosis),
                              format_cell(s.jb_stat), format_cell(s.jb_pvalue),
                              format_double(s.adf_stat), format_double(s.adf_pvalue)});
    }
    csv::write_file(path, table);
}

void write_matrix_csv(const std::string& path, const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& matrix) {
    csv::Table table;
    table.header.push_back("series");
    table.header.insert(table.header.end(), labels.begin(), labels.end());
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        std::vector<std::string> row{labels[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            row.push_back(format_double(matrix(i, j)));
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

void write_mask_csv(const std::string& path, const std::vector<std::string>& labels,
                    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
    csv::Table table;
    table.header.push_back("series");
    table.header.insert(table.header.end(), labels.begin(), labels.end());
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
        std::vector<std::string> row{labels[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            row.push_back(mask(i, j) ? "1" : "0");
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

void write_static_tables_csv(const std::string& path,
                             const std::vector<ConnectednessTable>& tables,
                             const std::vector<std::string>& labels, bool include_npdc) {
    csv::Table table;
    table.header = {"tau", "band", "series", "measure", "value"};
    for (const auto& ct : tables) {
        append_measure_rows(table, {format_double(ct.tau), ct.band}, ct, labels, include_npdc);
    }
    csv::write_file(path, table);
}

void write_rolling_csv(const std::string& path, const RollingResult& result,
                       bool include_npdc) {
    csv::Table table;
    table.header = {"date", "tau", "band", "series", "measure", "value"};
    for (const auto& entry : result.entries) {
        if (!entry.ok) continue;
        for (const auto& ct : entry.tables) {
            append_measure_rows(table, {entry.date, format_double(entry.tau), ct.band}, ct,
                                result.labels, include_npdc);
        }
    }
    csv::write_file(path, table);
}

void write_flags_csv(const std::string& path, const RollingResult& result) {
    csv::Table table;
    table.header = {"date", "tau", "error"};
    for (const auto& entry : result.entries) {
        if (entry.ok) continue;
        table.rows.push_back({entry.date, format_double(entry.tau), entry.error});
    }
    csv::write_file(path, table);
}

void write_series_csv(const std::string& path, const DatedSeries& series,
                      const std::string& value_name) {
    csv::Table table;
    table.header = {"date", value_name};
    for (std::size_t i = 0; i < series.dates.size(); ++i) {
        table.rows.push_back(
            {series.dates[i], format_double(series.values(static_cast<Eigen::Index>(i)))});
    }
    csv::write_file(path, table);
}

void write_surfaces_csv(const std::string& path, const QuantileSurfaces& surfaces) {
    csv::Table table;
    table.header = {"date", "tau", "band", "series", "measure", "value"};
    for (std::size_t b = 0; b < surfaces.bands.size(); ++b) {
        const auto& band = surfaces.bands[b];
        const auto& tci = surfaces.tci[b];
        for (std::size_t d = 0; d < tci.dates.size(); ++d) {
            for (std::size_t q = 0; q < tci.taus.size(); ++q) {
                const double v =
                    tci.values(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(q));
                if (std::isnan(v)) continue;
                table.rows.push_back({tci.dates[d], format_double(tci.taus[q]), band, "ALL",
                                      "TCI", format_double(v)});
            }
        }
        for (std::size_t s = 0; s < surfaces.net[b].size(); ++s) {
            const auto& net = surfaces.net[b][s];
            for (std::size_t d = 0; d < net.dates.size(); ++d) {
                for (std::size_t q = 0; q < net.taus.size(); ++q) {
                    const double v =
                        net.values(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(q));
                    if (std::isnan(v)) continue;
                    table.rows.push_back({net.dates[d], format_double(net.taus[q]), band,
                                          surfaces.labels[s], "NET", format_double(v)});
                }
            }
        }
    }
    csv::write_file(path, table);
}

void write_weights_csv(const std::string& path, const WeightPath& path_data,
                       const std::vector<std::string>& labels) {
    csv::Table table;
    table.header.push_back("date");
    table.header.insert(table.header.end(), labels.begin(), labels.end());
    for (std::size_t i = 0; i < path_data.dates.size(); ++i) {
        std::vector<std::string> row{path_data.dates[i]};
        for (Eigen::Index j = 0; j < path_data.weights.cols(); ++j) {
            row.push_back(format_double(path_data.weights(static_cast<Eigen::Index>(i), j)));
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

void write_weight_stats_csv(const std::string& path, const std::vector<std::string>& labels,
                            const WeightPath& weights, const PerformanceReport& report) {
    csv::Table table;
    table.header = {"series", "mean", "std_dev", "q05", "q95", "he", "he_pvalue"};
    const Eigen::Index rows = weights.weights.rows();
    for (std::size_t j = 0; j < labels.size(); ++j) {
        const Eigen::VectorXd w = weights.weights.col(static_cast<Eigen::Index>(j));
        std::vector<double> sorted(w.data(), w.data() + w.size());
        std::sort(sorted.begin(), sorted.end());
        const auto quantile = [&](double alpha) {
            const double h = alpha * static_cast<double>(sorted.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(h));
            if (lo + 1 >= sorted.size()) return sorted.back();
            return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
        };
        const double mean = w.mean();
        const double sd =
            rows > 1 ? std::sqrt((w.array() - mean).square().sum() / (rows - 1)) : 0.0;
        table.rows.push_back({labels[j], format_double(mean), format_double(sd),
                              format_double(quantile(0.05)), format_double(quantile(0.95)),
                              format_double(report.he(static_cast<Eigen::Index>(j))),
                              format_double(report.he_pvalue(static_cast<Eigen::Index>(j)))});
    }
    csv::write_file(path, table);
}

void write_performance_csv(const std::string& path,
                           const std::vector<PerformancePanel>& panels) {
    csv::Table table;
    table.header = {"panel", "metric"};
    if (!panels.empty()) {
        table.header.insert(table.header.end(), panels.front().strategies.begin(),
                            panels.front().strategies.end());
    }
    const std::vector<std::pair<std::string, double PerformanceReport::*>> metrics = {
        {"Return", &PerformanceReport::mean_return},
        {"StdDev", &PerformanceReport::std_dev},
        {"SharpeRatio(StdDev)", &PerformanceReport::sharpe_std},
        {"SharpeRatio(VaR)", &PerformanceReport::sharpe_var},
        {"SharpeRatio(CVaR)", &PerformanceReport::sharpe_cvar},
    };
    for (const auto& panel : panels) {
        for (const auto& [name, member] : metrics) {
            std::vector<std::string> row{panel.name, name};
            for (const auto& report : panel.reports) {
                row.push_back(format_double(report.*member));
            }
            table.rows.push_back(std::move(row));
        }
    }
    csv::write_file(path, table);
}

void write_cumulative_csv(const std::string& path, const std::vector<std::string>& dates,
                          const std::vector<std::string>& strategies,
                          const std::vector<Eigen::VectorXd>& cumulative) {
    csv::Table table;
    table.header.push_back("date");
    table.header.insert(table.header.end(), strategies.begin(), strategies.end());
    for (std::size_t i = 0; i < dates.size(); ++i) {
        std::vector<std::string> row{dates[i]};
        for (const auto& series : cumulative) {
            row.push_back(format_double(series(static_cast<Eigen::Index>(i))));
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

NetworkExport build_network(const ConnectednessTable& table,
                            const std::vector<std::string>& labels, double min_edge_weight) {
    NetworkExport network;
    const Eigen::Index n = table.npdc.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        network.nodes.push_back({labels[static_cast<std::size_t>(i)], table.net(i)});
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = table.npdc(i, j);
            // NPDC_ij > 0: series j dominates series i, so spillovers flow
            // from j (source) to i (target).
            if (w > 0.0 && w >= min_edge_weight) {
                network.edges.push_back({labels[static_cast<std::size_t>(j)],
                                         labels[static_cast<std::size_t>(i)], w});
            }
        }
    }
    return network;
}

void write_network_csv(const std::string& edges_path, const std::string& nodes_path,
                       const NetworkExport& network) {
    csv::Table edges;
    edges.header = {"source", "target", "weight"};
    for (const auto& edge : network.edges) {
        edges.rows.push_back({edge.source, edge.target, format_double(edge.weight)});
    }
    csv::write_file(edges_path, edges);

    csv::Table nodes;
    nodes.header = {"series", "net"};
    for (const auto& node : network.nodes) {
        nodes.rows.push_back({node.label, format_double(node.net)});
    }
    csv::write_file(nodes_path, nodes);
}

void write_network_json(const std::string& path, const NetworkExport& network) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& node : network.nodes) {
        doc["nodes"].push_back({{"id", node.label}, {"net", node.net}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& edge : network.edges) {
        doc["edges"].push_back(
            {{"source", edge.source}, {"target", edge.target}, {"weight", edge.weight}});
    }
    csv::write_text_file(path, doc.dump(2) + "\n");
}

void write_metadata_json(const std::string& path,
                         const std::map<std::string, std::string>& entries) {
    nlohmann::json doc;
    for (const auto& [key, value] : entries) {
        doc[key] = value;
    }
    csv::write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace qconn::io
