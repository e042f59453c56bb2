#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfcd/adc.hpp"
#include "gfcd/model.hpp"
#include "gfcd/policies.hpp"
#include "gfcd/solver.hpp"

namespace gfcd::experiment {

/// Parse or validation failure pinned to a location in the spec file.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct EmitOptions {
  bool traces = true;
  bool summaries = true;
  bool aggregate_csv = true;
  bool operator==(const EmitOptions&) const = default;
};

/// Everything needed to run a (policy x seed) grid.
///
/// Defaults are the large-cell simulation values. `preset: desk` switches to
/// N = 100, K = 10, L = 40, M = 16 with 50 NR iterations and epoch-level
/// stopping, and enables the reference runs used for suboptimality plots.
struct ExperimentSpec {
  std::string preset = "large";
  SystemConfig scenario;
  /// Saved scenario (JSON) used for every seed instead of generating one;
  /// relative paths resolve against the spec file's directory.
  std::string scenario_file;
  std::vector<PolicyConfig> policies;
  StopRule stop;
  /// Stop window of N*R iterations instead of stop.window.
  bool stop_window_epoch = false;
  /// max_iters = 50 N R instead of stop.max_iters.
  bool max_iters_auto = false;
  std::optional<QuantizerConfig> adc;
  int num_seeds = 1;
  std::string output_dir = "out";
  EmitOptions emit;
  /// Run a long reference solve per seed and record F* for suboptimality.
  bool reference = false;
  int refactor_period = kDefaultRefactorPeriod;

  bool operator==(const ExperimentSpec&) const = default;

  /// Stop rule with the epoch window / auto iteration cap resolved.
  StopRule resolved_stop() const;
  /// Scenario master seed of seed index s (master_seed + s).
  std::uint64_t seed_of(int index) const { return scenario.master_seed + static_cast<std::uint64_t>(index); }
  /// "unquantized" or "b3" etc.
  std::string adc_label() const;
};

/// Parse YAML text. `source` names the file in diagnostics.
ExperimentSpec parse_spec(const std::string& text, const std::string& source = "<spec>");
ExperimentSpec load_spec(const std::string& path);

/// Canonical YAML; parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const ExperimentSpec& spec);

/// Hex FNV-1a digest of the canonical description of one (policy, seed) cell.
std::string cell_digest(const ExperimentSpec& spec, const PolicyConfig& policy, std::uint64_t seed);

}  // namespace gfcd::experiment
