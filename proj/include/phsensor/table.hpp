#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace phs::table {

using Cell = std::variant<double, std::uint64_t, std::string>;

// Columnar result set with an ordered parameter-echo header.  The same table
// renders to CSV (meta as leading "# key = value" lines) or to a JSON object
// {meta, rows}; floating-point cells carry 17 significant digits in CSV.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string key, std::string value);
  void add_meta(std::string key, double value);
  void add_meta(std::string key, std::uint64_t value);
};

// %.17g rendering used for every floating-point value in text output.
std::string format_double(double x);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

}  // namespace phs::table
