#pragma once

#include <iosfwd>
#include <string>

#include "rkit/analysis.hpp"

namespace rkit {

// 17 significant digits, '.' separator; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

// Header names the columns and their units, e.g. "E (hartree),Re S,delta (rad)".
void write_csv(const ScanTable& table, std::ostream& out);
void write_csv_file(const ScanTable& table, const std::string& path);

// Columns of a CSV written by write_csv, parsed back to doubles.
ScanTable read_csv(std::istream& in);

// Gnuplot script plotting every column of csv_path against E.
std::string gnuplot_script(const ScanTable& table, const std::string& csv_path, const std::string& title);

}  // namespace rkit
