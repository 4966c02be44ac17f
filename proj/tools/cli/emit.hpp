#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dce::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  void add(std::vector<Cell> row);
};

/// Header row, then one line per row; doubles as %.17g, '.' decimal point.
/// Non-finite doubles raise PhysicsError.
std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);

/// Inverse of to_csv (numeric cells come back as double or integer).
Table table_from_csv(const std::string& name, const std::string& text);
Table table_from_json(const nlohmann::json& j);

/// Writes <dir>/<name>.<csv|json> and returns its path.
std::string write_table(const Table& t, const std::string& dir, const std::string& format);
void write_json_file(const std::string& path, const nlohmann::json& j);

std::string format_double(double x);

}  // namespace dce::cli
