#include "nnlsm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nnlsm {

HalfWidth half_width_from_string(std::string_view name) {
    if (name == "std") return HalfWidth::std_dev;
    if (name == "1.96std") return HalfWidth::std_196;
    if (name == "ci") return HalfWidth::mean_ci;
    throw std::invalid_argument("unknown half-width kind '" + std::string(name) + "'");
}

double half_width(const RunStats& stats, HalfWidth kind) {
    switch (kind) {
        case HalfWidth::std_dev: return stats.half_width_std;
        case HalfWidth::std_196: return stats.half_width_196_std;
        case HalfWidth::mean_ci: return stats.half_width_mean_ci;
    }
    return stats.half_width_196_std;
}

TableCell make_cell(std::string row, std::string column, const RunStats& stats, HalfWidth kind) {
    return {std::move(row), std::move(column), stats.mean, half_width(stats, kind)};
}

std::string format_cell(double mean, double half_width) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f (± %.3f)", mean, half_width);
    return buf;
}

namespace {

void check_cells(std::span<const TableCell> cells) {
    if (cells.empty()) throw std::invalid_argument("table: no cells");
    for (const auto& c : cells)
        if (c.row.empty() || c.column.empty()) throw std::invalid_argument("table: empty row or column label");
}

void add_unique(std::vector<std::string>& list, const std::string& label) {
    if (std::find(list.begin(), list.end(), label) == list.end()) list.push_back(label);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

}  // namespace

std::string emit_markdown(std::span<const TableCell> cells) {
    check_cells(cells);
    std::vector<std::string> rows, columns;
    std::map<std::pair<std::string, std::string>, const TableCell*> lookup;
    for (const auto& c : cells) {
        add_unique(rows, c.row);
        add_unique(columns, c.column);
        lookup[{c.row, c.column}] = &c;
    }
    std::ostringstream out;
    out << "| |";
    for (const auto& col : columns) out << ' ' << col << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& row : rows) {
        out << "| " << row << " |";
        for (const auto& col : columns) {
            auto it = lookup.find({row, col});
            out << ' ' << (it == lookup.end() ? std::string("-") : format_cell(it->second->mean, it->second->half_width))
                << " |";
        }
        out << '\n';
    }
    return out.str();
}

std::string emit_csv(std::span<const TableCell> cells) {
    check_cells(cells);
    std::ostringstream out;
    out << "row,column,mean,half_width\n";
    char buf[64];
    for (const auto& c : cells) {
        out << csv_field(c.row) << ',' << csv_field(c.column) << ',';
        std::snprintf(buf, sizeof buf, "%.17g,", c.mean);
        out << buf;
        std::snprintf(buf, sizeof buf, "%.17g\n", c.half_width);
        out << buf;
    }
    return out.str();
}

std::vector<TableCell> parse_csv(std::string_view text) {
    std::vector<TableCell> cells;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line != "row,column,mean,half_width") throw std::invalid_argument("csv: unexpected header");
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) throw std::invalid_argument("csv: expected 4 fields in '" + line + "'");
        cells.push_back({fields[0], fields[1], std::stod(fields[2]), std::stod(fields[3])});
    }
    return cells;
}

}  // namespace nnlsm
