#pragma once

// Column-named tables and their CSV / JSON writers.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace spinpair::cli {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::logic_error("Table::add_row: width mismatch");
        rows.push_back(std::move(row));
    }

    [[nodiscard]] std::size_t column_index(const std::string &name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return i;
        throw std::out_of_range("Table: no column '" + name + "'");
    }

    [[nodiscard]] std::vector<double> numbers(const std::string &name) const {
        const std::size_t k = column_index(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto &row : rows)
            out.push_back(std::get<double>(row[k]));
        return out;
    }
};

/// 17 significant digits, scientific.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x == 0.0 ? 0.0 : x);
    return buf;
}

inline void write_csv(std::ostream &out, const Table &table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out << ',';
            if (const auto *x = std::get_if<double>(&row[i]))
                out << format_number(*x);
            else
                out << std::get<std::string>(row[i]);
        }
        out << '\n';
    }
}

/// Array of row objects, keys in column order.
inline nlohmann::ordered_json to_json(const Table &table) {
    auto out = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        auto obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](const auto &v) { obj[table.columns[i]] = v; }, row[i]);
        out.push_back(std::move(obj));
    }
    return out;
}

inline void write_json(std::ostream &out, const Table &table) {
    out << to_json(table).dump(2) << '\n';
}

} // namespace spinpair::cli
