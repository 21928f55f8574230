#include "mimosec/csvio.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>

#include "mimosec/config.hpp"

namespace mimosec {

void ResultTable::add_row(std::vector<double> row) {
    if (!columns.empty() && row.size() != columns.size())
        throw DimensionError("row width disagrees with the column header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string render_csv(const ResultTable& table) {
    std::string out = "#" + table.provenance.dump() + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_csv_file(const ResultTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open output file: " + path);
    f << render_csv(table);
    if (!f) throw ParameterError("failed writing output file: " + path);
}

std::string config_hash(const nlohmann::json& config) {
    const std::string dump = config.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf, 16);
}

}  // namespace mimosec
