#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace qconn {

/// Date-indexed matrix of raw prices. Entries may be NaN (missing).
/// Invariants: dates strictly increasing ISO-8601 calendar dates, labels
/// unique, values has one row per date and one column per label.
struct PricePanel {
    std::vector<std::string> dates;
    std::vector<std::string> labels;
    Eigen::MatrixXd values;  // T x n, NaN marks a missing observation
};

/// Date-indexed matrix of log returns. No missing entries.
struct ReturnPanel {
    std::vector<std::string> dates;
    std::vector<std::string> labels;
    Eigen::MatrixXd values;  // T x n
};

/// Checks "YYYY-MM-DD" with a valid calendar day.
[[nodiscard]] bool is_iso_date(const std::string& s);

/// Serial day number of an ISO date (days since 1970-01-01).
[[nodiscard]] long days_from_iso(const std::string& s);

/// Inverse of days_from_iso.
[[nodiscard]] std::string iso_from_days(long days);

/// Loads a price panel from CSV. The date column (default header "date")
/// must come first; every other column is one series. Empty cells become
/// NaN. Throws std::runtime_error on unreadable files, unparseable dates,
/// non-increasing or duplicate dates (naming the offending row).
[[nodiscard]] PricePanel load_price_csv(const std::string& path,
                                        const std::string& date_column = "date");

/// Loads a return panel (same layout, no missing cells allowed).
[[nodiscard]] ReturnPanel load_return_csv(const std::string& path,
                                          const std::string& date_column = "date");

/// Writes a panel as CSV with full double precision, so that reloading
/// reproduces the values bit-exactly.
void write_panel_csv(const std::string& path, const std::vector<std::string>& dates,
                     const std::vector<std::string>& labels, const Eigen::MatrixXd& values);

/// Forward-fills interior and trailing gaps with the last prior value and
/// backfills leading gaps with the first observed value. Idempotent.
/// Throws std::runtime_error naming any series with zero observed values.
[[nodiscard]] PricePanel clean(const PricePanel& panel);

/// Log returns ln(p_{t+1}/p_t); output has one row fewer than the input.
/// Requires a cleaned panel with strictly positive prices; throws with the
/// (row, column) coordinates of any offending entry.
[[nodiscard]] ReturnPanel log_returns(const PricePanel& panel);

/// Splits into rows strictly before break_date and rows from break_date
/// onward. break_date must lie within [first date, last date].
[[nodiscard]] std::pair<ReturnPanel, ReturnPanel> split(const ReturnPanel& panel,
                                                        const std::string& break_date);

}  // namespace qconn
