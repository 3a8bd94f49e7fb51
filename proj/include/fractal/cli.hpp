#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace fractal::cli {

/// 12 significant digits, "%.12g".
std::string format_number(double x);

/// Column-named rows rendered as CSV (header row, ',' separator) or as a
/// JSON array of objects.
struct Table {
    using Cell = std::variant<double, std::string>;

    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
    std::string csv() const;
    std::string json() const;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// --out or `out`; diagnostics and summary lines go to `err`, or to `out`
/// when --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fractal::cli
