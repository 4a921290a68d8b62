#pragma once

#include <string>
#include <vector>

namespace qconn::csv {

/// A parsed CSV file: header row plus data rows, all fields as raw strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a comma-separated file. The first line is treated as the header.
/// Fields may be double-quoted; embedded commas inside quotes are kept.
/// Throws std::runtime_error if the file cannot be opened or a row has a
/// different field count than the header.
[[nodiscard]] Table read_file(const std::string& path);

/// Writes a table atomically (temp file in the same directory + rename).
void write_file(const std::string& path, const Table& table);

/// Formats a double with enough digits (%.17g) that parsing the text back
/// recovers the original value.
[[nodiscard]] std::string format_double(double value);

/// Parses a field as double. Empty fields are NaN. Throws on garbage.
[[nodiscard]] double parse_double(const std::string& field);

/// Writes raw text atomically (temp file + rename). Used for non-tabular
/// outputs such as JSON.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qconn::csv
