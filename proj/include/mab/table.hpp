// Plain tabular output with locale-independent number formatting.
#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "mab/geometric_phase.hpp"

namespace mab {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Shortest-form-independent rendering: 17 significant digits, '.' decimal, "nan"/"inf".
std::string format_double(double value);

std::string format_cell(const Cell& cell);

/// Comma-separated with a mandatory header row and '\n' line endings.
void write_csv(std::ostream& out, const Table& table);

/// Reads an "x,y" CSV with a header row naming the two columns x and y (any order).
std::vector<PlanarPoint> read_path_csv(std::istream& in);

}  // namespace mab
