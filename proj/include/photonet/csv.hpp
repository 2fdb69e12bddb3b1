// csv.hpp — Number formatting, CSV tables, atomic file writes and trace comparison

#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace photonet {

// Shortest round-trip-safe text for a double: 17 significant digits, locale independent.
std::string format_double(double value);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
    std::vector<std::string> comments;   // lines starting with '#', without the marker
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Index of a named column; throws photonet::Error if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> numeric(const std::string& name) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

struct ColumnDeviation {
    std::string column;
    double linf{0.0};   // max |b - a| / max |a|
    double l2{0.0};     // ||b - a||_2 / ||a||_2
    bool exceeds{false};
};

struct CompareReport {
    std::vector<ColumnDeviation> columns;
    std::optional<double> tolerance;

    bool ok() const;
    std::string to_text() const;
    std::string to_json() const;
};

// Per-column relative deviations of b against a. Both tables must share the column
// schema and the time column. Text columns (method) and the residual/edge diagnostics
// are skipped.
CompareReport compare_tables(const CsvTable& a, const CsvTable& b, std::optional<double> tolerance = std::nullopt);

} // namespace photonet
