#pragma once

#include <cstdint>
#include <vector>

#include "gfcd/covariance.hpp"
#include "gfcd/policies.hpp"
#include "gfcd/rng.hpp"

namespace gfcd {

/// Stop when |F^t - F^{t-W}| / |F^{t-W}| <= rel_tol, or at max_iters.
struct StopRule {
  double rel_tol = 1e-6;
  std::int64_t max_iters = 1500;
  int window = 1;
  void validate() const;
  bool operator==(const StopRule&) const = default;
};

struct TraceRecord {
  std::int64_t t = 0;
  Eigen::Index k = 0;
  double delta = 0.0;
  double reward = 0.0;
  double F = 0.0;          // objective after the update
  bool greedy = false;
  int arm = -1;            // Thompson arm, -1 for other policies
  double nu = -1.0;        // Thompson exploitation probability, -1 otherwise
  double elapsed_s = 0.0;  // since the start of the run
};

struct Trace {
  std::vector<TraceRecord> records;
  double initial_F = 0.0;
  double final_F = 0.0;
  std::int64_t iterations = 0;
  std::int64_t reward_scans = 0;
  bool converged = false;
  double total_seconds = 0.0;
};

struct RunResult {
  RVector gamma;
  Trace trace;
};

struct RunOptions {
  int refactor_period = kDefaultRefactorPeriod;
};

/// Coordinate descent on `problem` with the given selection policy.
RunResult run(const Problem& problem, const PolicyConfig& policy, const StopRule& stop, RngStream& rng,
              const RunOptions& options = {});

/// F_t - F_star floored at zero, for t = 0 (initial point) .. T.
std::vector<double> suboptimality_series(const Trace& trace, double F_star);

/// gamma after the first `t` records of the trace (replaying the deltas).
RVector replay_gamma(const Trace& trace, Eigen::Index num_coords, std::int64_t t);

/// Minimum objective from a long CD-Bernoulli run (50 NR iterations,
/// rel_tol 1e-12 over an NR-iteration window) minus a rounding guard.
double reference_objective(const Problem& problem, RngStream& rng);

}  // namespace gfcd
