#pragma once

// Row buffer and the two output encodings: CSV behind a '#'-prefixed JSON
// header line, or JSON lines (header object first).

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace vcoop::cli {

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;  // trailing remarks, e.g. checked claims

    void add_row(std::vector<Cell> row);
};

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

void write_csv(std::ostream& out, const nlohmann::ordered_json& header, const Table& table);
void write_json_lines(std::ostream& out, const nlohmann::ordered_json& header, const Table& table);

} // namespace vcoop::cli
