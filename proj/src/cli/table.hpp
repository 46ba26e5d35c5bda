#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace gkq::cli {

// Empty cells (monostate) mean "not applicable".
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  int column_index(const std::string& name) const;  // -1 when absent
};

// %.17g, with nan/inf spelled out.
std::string format_double(double v);
std::string format_cell(const Cell& c);

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);

// Minimal reader for the CSV written above (no quoting).
Table read_csv(std::istream& is);
double cell_as_double(const std::string& text);

}  // namespace gkq::cli
