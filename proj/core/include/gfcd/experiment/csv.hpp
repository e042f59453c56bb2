#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfcd::experiment {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Write `content` to `path` via a temporary sibling and a rename, creating
/// parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Versioned CSV table: "# <schema> vMAJOR.MINOR", a header line, rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index; throws SchemaError naming `source` when absent.
  std::size_t column(const std::string& name, const std::string& source = "csv") const;
};

/// Parses text written by the helpers below. Rejects a different schema name
/// or major version, and rows whose width differs from the header.
CsvTable parse_csv(const std::string& text, const std::string& schema, int major,
                   const std::string& source = "csv");

/// Fields are emitted verbatim; callers keep commas and newlines out of them.
std::string csv_line(const std::vector<std::string>& fields);

double parse_double_field(const std::string& field);

}  // namespace gfcd::experiment
