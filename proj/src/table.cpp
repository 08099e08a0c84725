#include "phsensor/table.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace phs::table {

void Table::add_meta(std::string key, std::string value) {
  meta.emplace_back(std::move(key), std::move(value));
}

void Table::add_meta(std::string key, double value) {
  meta.emplace_back(std::move(key), format_double(value));
}

void Table::add_meta(std::string key, std::uint64_t value) {
  meta.emplace_back(std::move(key), std::to_string(value));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string render(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return std::to_string(*u);
  return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (const auto& [key, value] : t.meta) {
    out += "# ";
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw std::logic_error("table row width does not match the column count");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += render(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  auto& meta = j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : t.meta) meta[key] = value;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw std::logic_error("table row width does not match the column count");
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& cell = row[i];
      if (const auto* d = std::get_if<double>(&cell))
        obj[t.columns[i]] = *d;
      else if (const auto* u = std::get_if<std::uint64_t>(&cell))
        obj[t.columns[i]] = *u;
      else
        obj[t.columns[i]] = std::get<std::string>(cell);
    }
    rows.push_back(std::move(obj));
  }
  return j.dump(2) + "\n";
}

}  // namespace phs::table
