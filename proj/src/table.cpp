#include "mab/table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "mab/types.hpp"

namespace mab {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != header.size()) throw DomainError("table row width does not match header");
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buffer, ptr);
}

std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    return fields;
}

double to_double(const std::string& text, std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw DomainError("path CSV line " + std::to_string(line_no) + ": bad number '" + text + "'");
    return value;
}

}  // namespace

std::vector<PlanarPoint> read_path_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int x_col = -1, y_col = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i] == "x") x_col = static_cast<int>(i);
            if (fields[i] == "y") y_col = static_cast<int>(i);
        }
        break;
    }
    if (x_col < 0 || y_col < 0) throw DomainError("path CSV needs a header row with columns x and y");

    std::vector<PlanarPoint> points;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (static_cast<int>(fields.size()) <= std::max(x_col, y_col))
            throw DomainError("path CSV line " + std::to_string(line_no) + ": missing columns");
        points.push_back({to_double(fields[x_col], line_no), to_double(fields[y_col], line_no)});
    }
    return points;
}

}  // namespace mab
