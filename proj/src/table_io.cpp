#include "rkit/table_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "rkit/errors.hpp"

namespace rkit {

namespace {

std::string header_name(const std::string& name, const std::string& unit) {
  return unit.empty() ? name : name + " (" + unit + ")";
}

std::pair<std::string, std::string> split_header(const std::string& cell) {
  const auto open = cell.rfind(" (");
  if (open == std::string::npos || cell.back() != ')') return {cell, ""};
  return {cell.substr(0, open), cell.substr(open + 2, cell.size() - open - 3)};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const ScanTable& table, std::ostream& out) {
  out << header_name("E", table.energy_unit);
  for (const auto& c : table.columns) out << ',' << header_name(c.name, c.unit);
  out << '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out << format_double(table.energies[i]);
    for (const auto& c : table.columns) out << ',' << format_double(c.values[i]);
    out << '\n';
  }
}

void write_csv_file(const ScanTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  write_csv(table, f);
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

ScanTable read_csv(std::istream& in) {
  ScanTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  const auto head = split(line);
  if (head.empty()) throw std::invalid_argument("empty CSV header");
  t.energy_unit = split_header(head[0]).second;
  for (std::size_t j = 1; j < head.size(); ++j) {
    auto [name, unit] = split_header(head[j]);
    t.add_column(name, unit, {});
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != head.size()) throw std::invalid_argument("CSV row has wrong number of cells");
    t.energies.push_back(parse_double(cells[0]));
    for (std::size_t j = 1; j < cells.size(); ++j) t.columns[j - 1].values.push_back(parse_double(cells[j]));
  }
  return t;
}

std::string gnuplot_script(const ScanTable& table, const std::string& csv_path, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set title '" << title << "'\n";
  os << "set xlabel 'E (" << table.energy_unit << ")'\n";
  os << "plot ";
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) os << ", \\\n     ";
    os << "'" << csv_path << "' using 1:" << j + 2 << " with lines";
  }
  os << '\n';
  return os.str();
}

}  // namespace rkit
