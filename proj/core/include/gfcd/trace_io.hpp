#pragma once

#include <iosfwd>
#include <string>

#include "gfcd/solver.hpp"

namespace gfcd {

/// Trace CSV: a schema comment line "# gfcd-trace v1.0", then the header
///   t,k,delta,reward,F,greedy,arm,nu,elapsed_s
/// and one row per iteration. Doubles are written shortest round-trip.
inline constexpr const char* kTraceHeader = "t,k,delta,reward,F,greedy,arm,nu,elapsed_s";
inline constexpr int kTraceSchemaMajor = 1;

void write_trace_csv(std::ostream& os, const Trace& trace);
/// Rejects a missing schema line, an unknown major version or a wrong header.
/// Only the records are restored; summary fields are derived from them.
Trace read_trace_csv(std::istream& is);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Parse "# <name> vMAJOR.MINOR"; throws std::runtime_error on mismatch.
void check_schema_line(const std::string& line, const std::string& name, int supported_major);

}  // namespace gfcd
