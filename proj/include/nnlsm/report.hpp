#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnlsm/experiment.hpp"

namespace nnlsm {

enum class HalfWidth { std_dev, std_196, mean_ci };

HalfWidth half_width_from_string(std::string_view name);
double half_width(const RunStats& stats, HalfWidth kind);

/// One table entry: rows are network sizes, columns are epoch counts.
struct TableCell {
    std::string row;
    std::string column;
    double mean = 0.0;
    double half_width = 0.0;

    friend bool operator==(const TableCell&, const TableCell&) = default;
};

TableCell make_cell(std::string row, std::string column, const RunStats& stats,
                    HalfWidth kind = HalfWidth::std_196);

/// "11.98 (± 0.057)": price to 2 decimals, half-width to 3.
std::string format_cell(double mean, double half_width);

/// Grid with rows and columns in first-appearance order. Throws on an empty list
/// or an empty label.
std::string emit_markdown(std::span<const TableCell> cells);

/// row,column,mean,half_width with round-trip precision.
std::string emit_csv(std::span<const TableCell> cells);
std::vector<TableCell> parse_csv(std::string_view text);

}  // namespace nnlsm
