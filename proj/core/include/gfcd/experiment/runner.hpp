#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfcd/experiment/spec.hpp"
#include "gfcd/model.hpp"
#include "gfcd/solver.hpp"

namespace gfcd::experiment {

enum class CellStatus { Ok, NumericalError, Error };

const char* status_name(CellStatus s);

/// Outcome of one (policy, seed) cell.
struct CellResult {
  std::size_t policy_index = 0;
  std::string policy;  // unique label, see policy_labels()
  int seed_index = 0;
  std::uint64_t seed = 0;
  std::string adc;
  std::string digest;
  CellStatus status = CellStatus::Ok;
  std::string error;

  double initial_F = 0.0;
  double final_F = 0.0;
  double F_star = 0.0;  // NaN unless the spec asks for reference runs
  std::int64_t iterations = 0;
  std::int64_t reward_scans = 0;
  bool converged = false;
  double wall_s = 0.0;
  double p_md = 1.0;
  double p_fa = 0.0;

  /// Filled when RunnerOptions::keep_traces is set.
  Trace trace;
  GroundTruth truth;
};

struct RunnerOptions {
  /// Worker threads; values below 1 use the hardware concurrency.
  int jobs = 1;
  bool write_outputs = true;
  bool keep_traces = false;
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // sorted by (policy index, seed)
  int failed_cells() const;
  bool any_numerical_failure() const;
};

/// Policy names made unique by appending "-<position>" to repeated kinds.
std::vector<std::string> policy_labels(const ExperimentSpec& spec);

/// Problem for one seed: the scenario (generated or loaded) and, with an ADC
/// configured, the quantized surrogate.
struct SeedProblem {
  Scenario scenario;
  Problem problem;
};
SeedProblem build_seed_problem(const ExperimentSpec& spec, std::uint64_t seed);

/// Runs every (policy, seed) cell and, unless disabled, writes under
/// spec.output_dir:
///   traces/<policy>_seed<seed>.csv, summaries/<policy>_seed<seed>.json,
///   aggregate.csv, timing.csv, spec.yaml.
/// Cell failures are recorded and do not stop the remaining cells.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunnerOptions& options = {});

/// "# gfcd-aggregate v1.0" table; fully determined by spec and seeds.
inline constexpr const char* kAggregateHeader =
    "policy,seed,adc,final_F,F_star,iterations,reward_scans,converged,p_md,p_fa,config_digest,status";
std::string aggregate_csv(const ExperimentResult& result);

/// "# gfcd-timing v1.0" table with the per-cell wall seconds.
inline constexpr const char* kTimingHeader = "policy,seed,wall_s";
std::string timing_csv(const ExperimentResult& result);

}  // namespace gfcd::experiment
