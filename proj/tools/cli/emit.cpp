#include "emit.hpp"

#include <cerrno>
#include <clocale>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dcelab/errors.hpp"

namespace dce::cli {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_q = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_q) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_q = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_q = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Cell parse_cell(const std::string& s) {
  if (s.empty()) return s;
  char* end = nullptr;
  errno = 0;
  const bool integral = s.find_first_not_of("-0123456789") == std::string::npos;
  if (s == "-0") return -0.0;  // only a double prints like this
  if (integral) {
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (*end == '\0' && errno == 0) return v;
  }
  const double d = std::strtod(s.c_str(), &end);
  if (*end == '\0') return d;
  return s;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table " + name + ": row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (!std::isfinite(x)) throw PhysicsError("refusing to emit a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // guard against a locale with ',' as decimal separator
  for (char* p = buf; *p; ++p)
    if (*p == ',') *p = '.';
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + quote(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      const auto& c = row[i];
      try {
        if (const auto* d = std::get_if<double>(&c))
          out += format_double(*d);
        else if (const auto* n = std::get_if<long long>(&c))
          out += std::to_string(*n);
        else
          out += quote(std::get<std::string>(c));
      } catch (const PhysicsError&) {
        throw PhysicsError("table " + t.name + ", column " + t.columns[i] + ": non-finite value");
      }
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json j;
  j["name"] = t.name;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::json::array();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) throw PhysicsError("table " + t.name + ", column " + t.columns[i] + ": non-finite value");
        r.push_back(*d);
      } else if (const auto* n = std::get_if<long long>(&c)) {
        r.push_back(*n);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

Table table_from_csv(const std::string& name, const std::string& text) {
  Table t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  t.columns = split_csv_line(line);
  std::vector<std::vector<Cell>> rows;
  while (std::getline(in, line)) {
    std::vector<Cell> row;
    for (const auto& c : split_csv_line(line)) row.push_back(parse_cell(c));
    rows.push_back(std::move(row));
  }
  // %.17g drops the decimal point of integral doubles, so a column is only
  // integer when every cell is
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    bool any_double = false;
    for (const auto& r : rows)
      if (j < r.size() && std::holds_alternative<double>(r[j])) any_double = true;
    if (!any_double) continue;
    for (auto& r : rows)
      if (j < r.size())
        if (const auto* v = std::get_if<long long>(&r[j])) r[j] = static_cast<double>(*v);
  }
  for (auto& r : rows) t.add(std::move(r));
  return t;
}

Table table_from_json(const nlohmann::json& j) {
  Table t;
  t.name = j.at("name").get<std::string>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      if (c.is_number_integer())
        row.push_back(c.get<long long>());
      else if (c.is_number())
        row.push_back(c.get<double>());
      else
        row.push_back(c.get<std::string>());
    }
    t.add(std::move(row));
  }
  return t;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string write_table(const Table& t, const std::string& dir, const std::string& format) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / (t.name + "." + format)).string();
  if (format == "json") {
    write_json_file(path, to_json(t));
  } else {
    const auto text = to_csv(t);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
  }
  return path;
}

}  // namespace dce::cli
