#include "gfcd/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gfcd {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_schema_line(const std::string& line, const std::string& name, int supported_major) {
  const std::string prefix = "# " + name + " v";
  if (line.rfind(prefix, 0) != 0) throw std::runtime_error("schema error: expected '" + prefix + "<major>.<minor>'");
  const std::string ver = line.substr(prefix.size());
  int major = -1;
  const auto res = std::from_chars(ver.data(), ver.data() + ver.size(), major);
  if (res.ec != std::errc() || res.ptr == ver.data() + ver.size() || *res.ptr != '.')
    throw std::runtime_error("schema error: malformed version '" + ver + "'");
  if (major != supported_major)
    throw std::runtime_error("schema error: unsupported " + name + " major version " + std::to_string(major));
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "# gfcd-trace v" << kTraceSchemaMajor << ".0\n" << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    os << r.t << ',' << r.k << ',' << format_double(r.delta) << ',' << format_double(r.reward) << ','
       << format_double(r.F) << ',' << (r.greedy ? 1 : 0) << ',' << r.arm << ',' << format_double(r.nu) << ','
       << format_double(r.elapsed_s) << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::runtime_error("trace: bad number '" + s + "'");
  return v;
}

}  // namespace

Trace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trace: empty input");
  check_schema_line(line, "gfcd-trace", kTraceSchemaMajor);
  if (!std::getline(is, line) || line != kTraceHeader) throw std::runtime_error("schema error: unexpected trace header");
  Trace tr;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw std::runtime_error("trace: expected 9 columns, got " + std::to_string(f.size()));
    TraceRecord r;
    r.t = std::stoll(f[0]);
    r.k = std::stoll(f[1]);
    r.delta = parse_double(f[2]);
    r.reward = parse_double(f[3]);
    r.F = parse_double(f[4]);
    r.greedy = f[5] == "1";
    r.arm = std::stoi(f[6]);
    r.nu = parse_double(f[7]);
    r.elapsed_s = parse_double(f[8]);
    tr.records.push_back(r);
  }
  tr.iterations = static_cast<std::int64_t>(tr.records.size());
  if (!tr.records.empty()) {
    tr.final_F = tr.records.back().F;
    tr.total_seconds = tr.records.back().elapsed_s;
    // initial F is F_1 + r_1 (reward identity).
    tr.initial_F = tr.records.front().F + tr.records.front().reward;
  }
  return tr;
}

}  // namespace gfcd
