#include "dicke/output.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dicke/numeric.hpp"

namespace dicke {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("CSV table needs at least one column");
}

void CsvTable::add_row(std::span<const double> values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("CSV row width mismatch");
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(sci12(v));
    rows_.push_back(std::move(cells));
}

void CsvTable::add_row_text(std::span<const std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("CSV row width mismatch");
    rows_.emplace_back(cells.begin(), cells.end());
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

namespace {

void dump_value(const ordered_json& j, std::string& out, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case nlohmann::detail::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                out += pad_in;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            return;
        }
        case nlohmann::detail::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_value(j[i], out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            return;
        }
        case nlohmann::detail::value_t::number_float: {
            double v = j.get<double>();
            if (std::isfinite(v))
                out += sci12(v);
            else
                out += v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json12(const ordered_json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace dicke
