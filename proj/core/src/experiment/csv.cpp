#include "gfcd/experiment/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gfcd/trace_io.hpp"

namespace fs = std::filesystem;

namespace gfcd::experiment {

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::size_t CsvTable::column(const std::string& name, const std::string& source) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw SchemaError(source + ": missing column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& schema, int major, const std::string& source) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw SchemaError(source + ": empty file");
  try {
    check_schema_line(line, schema, major);
  } catch (const std::exception& e) {
    throw SchemaError(source + ": " + e.what());
  }
  CsvTable table;
  if (!std::getline(is, line)) throw SchemaError(source + ": missing header");
  table.header = split(line);
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != table.header.size())
      throw SchemaError(source + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " + std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  out.push_back('\n');
  return out;
}

double parse_double_field(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError("not a number: '" + field + "'");
  return v;
}

}  // namespace gfcd::experiment
