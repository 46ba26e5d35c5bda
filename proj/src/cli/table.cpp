#include "table.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gkq::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
  rows.push_back(std::move(row));
}

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (std::holds_alternative<std::monostate>(c)) {
        obj[t.columns[i]] = nullptr;
      } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
        obj[t.columns[i]] = *n;
      } else if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) {
          obj[t.columns[i]] = *d;
        } else {
          obj[t.columns[i]] = format_double(*d);
        }
      } else {
        obj[t.columns[i]] = std::get<std::string>(c);
      }
    }
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
  t.columns = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != t.columns.size()) throw std::runtime_error("ragged CSV row: " + line);
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      if (f.empty()) {
        row.emplace_back(std::monostate{});
      } else {
        row.emplace_back(std::move(f));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

double cell_as_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::runtime_error("not a number: '" + text + "'");
  }
  return v;
}

}  // namespace gkq::cli
