#include "table.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace vcoop::cli {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error(fmt::format("row has {} cells, table has {} columns", row.size(),
                                           columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

namespace {

std::string csv_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return fmt::format("{}", v); }
        std::string operator()(bool v) const { return v ? "1" : "0"; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            return quoted + "\"";
        }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(double v) const {
            // JSON has no inf/nan; keep them readable as strings.
            if (!std::isfinite(v)) return format_number(v);
            return v;
        }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, cell);
}

} // namespace

void write_csv(std::ostream& out, const nlohmann::ordered_json& header, const Table& table) {
    out << "# " << header.dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
    for (const auto& note : table.notes) out << "# " << note << '\n';
}

void write_json_lines(std::ostream& out, const nlohmann::ordered_json& header, const Table& table) {
    out << nlohmann::ordered_json{{"header", header}}.dump() << '\n';
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
        out << obj.dump() << '\n';
    }
    for (const auto& note : table.notes) out << nlohmann::ordered_json{{"note", note}}.dump() << '\n';
}

} // namespace vcoop::cli
