#pragma once

// Named numeric tables with CSV and JSON serialization. CSV values use 17
// significant digits so that reading a file back reproduces every double.

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace spdc {

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& col) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == col) return i;
        throw std::out_of_range("table '" + name + "' has no column '" + col + "'");
    }
};

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return {buf, ptr};
}

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline Table parse_csv(const std::string& text, std::string name = {}) {
    Table t{std::move(name), {}, {}};
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    {
        std::istringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) t.columns.push_back(col);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t end = std::min(line.find(',', pos), line.size());
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
            if (ec != std::errc{} || ptr != line.data() + end)
                throw std::runtime_error("malformed CSV field: '" + line.substr(pos, end - pos) + "'");
            row.push_back(v);
            pos = end + 1;
        }
        if (row.size() != t.columns.size()) throw std::runtime_error("CSV row width mismatch");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline nlohmann::json to_json(const Table& t) {
    return {{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}};
}

enum class OutputFormat { Csv, Json };

/// Writes `<dir>/<prefix>_<table>.csv|json` and returns the path.
inline std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir,
                                         const std::string& prefix, OutputFormat format) {
    std::filesystem::create_directories(dir);
    const auto path = dir / (prefix + "_" + t.name + (format == OutputFormat::Csv ? ".csv" : ".json"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    if (format == OutputFormat::Csv)
        out << to_csv(t);
    else
        out << to_json(t).dump(2) << '\n';
    return path;
}

}  // namespace spdc
