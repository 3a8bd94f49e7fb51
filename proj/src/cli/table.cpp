#include "fractal/cli.hpp"

#include <json.hpp>

#include <cstdio>

namespace fractal::cli {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(row));
}

std::string Table::csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) s += ',';
        s += columns[i];
    }
    s += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            if (const double* x = std::get_if<double>(&row[i])) s += format_number(*x);
            else s += std::get<std::string>(row[i]);
        }
        s += '\n';
    }
    return s;
}

std::string Table::json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const double* x = std::get_if<double>(&row[i])) obj[columns[i]] = *x;
            else obj[columns[i]] = std::get<std::string>(row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

}  // namespace fractal::cli
