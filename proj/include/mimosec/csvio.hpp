#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace mimosec {

/// Flat numeric table with a machine-readable provenance header. The
/// rendered form is byte-reproducible: same provenance + same rows always
/// produce the same file.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json provenance;  // '#'-prefixed JSON line at the top of the file

    void add_row(std::vector<double> row);
};

/// Shortest-exact decimal rendering of a double ("0.1", "17.64", "1e-09").
std::string format_double(double v);

/// Renders "#<provenance json>\n<header>\n<rows...>".
std::string render_csv(const ResultTable& table);

/// Writes render_csv(table) to path; throws ParameterError if unwritable.
void write_csv_file(const ResultTable& table, const std::string& path);

/// FNV-1a hash of the canonical (sorted-key) JSON dump, as fixed-width hex.
std::string config_hash(const nlohmann::json& config);

}  // namespace mimosec
