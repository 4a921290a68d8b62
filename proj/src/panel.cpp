#include "qconn/panel.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qconn/csv.hpp"

namespace qconn {

namespace {

void check_dates_and_labels(const std::vector<std::string>& dates,
                            const std::vector<std::string>& labels, const std::string& path) {
    for (std::size_t i = 0; i < dates.size(); ++i) {
        if (!is_iso_date(dates[i])) {
            std::ostringstream msg;
            msg << path << ": row " << i + 2 << ": unparseable date '" << dates[i] << "'";
            throw std::runtime_error(msg.str());
        }
        if (i > 0 && dates[i] <= dates[i - 1]) {
            std::ostringstream msg;
            msg << path << ": row " << i + 2 << ": date '" << dates[i]
                << (dates[i] == dates[i - 1] ? "' duplicates the previous row"
                                             : "' is not increasing");
            throw std::runtime_error(msg.str());
        }
    }
    std::set<std::string> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) {
            throw std::runtime_error(path + ": duplicate series label '" + label + "'");
        }
    }
}

template <typename Panel>
Panel load_panel(const std::string& path, const std::string& date_column) {
    const csv::Table table = csv::read_file(path);
    if (table.header.empty() || table.header[0] != date_column) {
        throw std::runtime_error(path + ": first column must be '" + date_column + "'");
    }
    if (table.header.size() < 2) {
        throw std::runtime_error(path + ": no series columns");
    }
    Panel panel;
    panel.labels.assign(table.header.begin() + 1, table.header.end());
    const auto n = static_cast<Eigen::Index>(panel.labels.size());
    const auto rows = static_cast<Eigen::Index>(table.rows.size());
    panel.values.resize(rows, n);
    panel.dates.reserve(table.rows.size());
    for (Eigen::Index t = 0; t < rows; ++t) {
        const auto& row = table.rows[static_cast<std::size_t>(t)];
        panel.dates.push_back(row[0]);
        for (Eigen::Index j = 0; j < n; ++j) {
            panel.values(t, j) = csv::parse_double(row[static_cast<std::size_t>(j) + 1]);
        }
    }
    check_dates_and_labels(panel.dates, panel.labels, path);
    return panel;
}

}  // namespace

bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    const int y = std::stoi(s.substr(0, 4));
    const int m = std::stoi(s.substr(5, 2));
    const int d = std::stoi(s.substr(8, 2));
    if (m < 1 || m > 12 || d < 1) return false;
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dmax = mdays[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) dmax = 29;
    return d <= dmax;
}

// Days-from-civil algorithm over a proleptic Gregorian calendar.
long days_from_iso(const std::string& s) {
    long y = std::stol(s.substr(0, 4));
    const unsigned m = static_cast<unsigned>(std::stoi(s.substr(5, 2)));
    const unsigned d = static_cast<unsigned>(std::stoi(s.substr(8, 2)));
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

std::string iso_from_days(long days) {
    days += 719468;
    const long era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04ld-%02u-%02u", y, m, d);
    return buf;
}

PricePanel load_price_csv(const std::string& path, const std::string& date_column) {
    auto panel = load_panel<PricePanel>(path, date_column);
    if (panel.dates.size() < 2) {
        throw std::runtime_error(path + ": a price panel needs at least two rows");
    }
    return panel;
}

ReturnPanel load_return_csv(const std::string& path, const std::string& date_column) {
    auto panel = load_panel<ReturnPanel>(path, date_column);
    for (Eigen::Index t = 0; t < panel.values.rows(); ++t) {
        for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
            if (std::isnan(panel.values(t, j))) {
                std::ostringstream msg;
                msg << path << ": missing return at row " << t + 2 << ", series '"
                    << panel.labels[static_cast<std::size_t>(j)] << "'";
                throw std::runtime_error(msg.str());
            }
        }
    }
    return panel;
}

void write_panel_csv(const std::string& path, const std::vector<std::string>& dates,
                     const std::vector<std::string>& labels, const Eigen::MatrixXd& values) {
    csv::Table table;
    table.header.push_back("date");
    table.header.insert(table.header.end(), labels.begin(), labels.end());
    table.rows.reserve(dates.size());
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
        std::vector<std::string> row;
        row.reserve(labels.size() + 1);
        row.push_back(dates[static_cast<std::size_t>(t)]);
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const double v = values(t, j);
            row.push_back(std::isnan(v) ? std::string() : csv::format_double(v));
        }
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

PricePanel clean(const PricePanel& panel) {
    PricePanel out = panel;
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        Eigen::Index first_obs = -1;
        for (Eigen::Index t = 0; t < out.values.rows(); ++t) {
            if (!std::isnan(out.values(t, j))) {
                first_obs = t;
                break;
            }
        }
        if (first_obs < 0) {
            throw std::runtime_error("series '" + out.labels[static_cast<std::size_t>(j)] +
                                     "' has no observed values");
        }
        for (Eigen::Index t = 0; t < first_obs; ++t) {
            out.values(t, j) = out.values(first_obs, j);
        }
        for (Eigen::Index t = first_obs + 1; t < out.values.rows(); ++t) {
            if (std::isnan(out.values(t, j))) {
                out.values(t, j) = out.values(t - 1, j);
            }
        }
    }
    return out;
}

ReturnPanel log_returns(const PricePanel& panel) {
    const Eigen::Index rows = panel.values.rows();
    const Eigen::Index n = panel.values.cols();
    for (Eigen::Index t = 0; t < rows; ++t) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double p = panel.values(t, j);
            if (std::isnan(p)) {
                std::ostringstream msg;
                msg << "missing price at row " << t << ", column " << j
                    << "; clean the panel first";
                throw std::runtime_error(msg.str());
            }
            if (p <= 0.0) {
                std::ostringstream msg;
                msg << "nonpositive price " << p << " at row " << t << ", column " << j;
                throw std::runtime_error(msg.str());
            }
        }
    }
    ReturnPanel out;
    out.labels = panel.labels;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.values = (panel.values.bottomRows(rows - 1).array().log() -
                  panel.values.topRows(rows - 1).array().log())
                     .matrix();
    return out;
}

std::pair<ReturnPanel, ReturnPanel> split(const ReturnPanel& panel,
                                          const std::string& break_date) {
    if (panel.dates.empty()) {
        throw std::runtime_error("cannot split an empty panel");
    }
    if (break_date < panel.dates.front() || break_date > panel.dates.back()) {
        throw std::runtime_error("break date " + break_date + " outside panel range [" +
                                 panel.dates.front() + ", " + panel.dates.back() + "]");
    }
    Eigen::Index cut = 0;
    while (cut < static_cast<Eigen::Index>(panel.dates.size()) &&
           panel.dates[static_cast<std::size_t>(cut)] < break_date) {
        ++cut;
    }
    ReturnPanel pre, post;
    pre.labels = post.labels = panel.labels;
    pre.dates.assign(panel.dates.begin(), panel.dates.begin() + cut);
    post.dates.assign(panel.dates.begin() + cut, panel.dates.end());
    pre.values = panel.values.topRows(cut);
    post.values = panel.values.bottomRows(panel.values.rows() - cut);
    return {std::move(pre), std::move(post)};
}

}  // namespace qconn
