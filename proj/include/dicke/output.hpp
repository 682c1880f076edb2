#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dicke {

using ordered_json = nlohmann::ordered_json;

// Column-oriented table with one header line. Serialization is fully
// deterministic: UTF-8, LF endings, 12-significant-digit scientific floats.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(std::span<const double> values);
    void add_row_text(std::span<const std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// JSON serialization with the same float policy as the CSV writer; key order
// follows insertion order.
std::string dump_json12(const ordered_json& j);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dicke
