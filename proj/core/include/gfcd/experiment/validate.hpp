#pragma once

#include <string>
#include <vector>

#include "gfcd/experiment/spec.hpp"

namespace gfcd::experiment {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct ValidateOptions {
  /// Random coordinate updates used by the reward and drift checks.
  int updates = 400;
  /// When set, the first seed's scenario is written here as JSON.
  std::string dump_scenario;
};

/// Invariant suite on the first seed of a spec, without running the
/// experiment: scenario structure, sample covariance Hermitian and PSD,
/// reward identity against the dense objective, inverse maintenance,
/// sign-constrained steps and, with an ADC configured, quantizer levels.
ValidationReport validate_spec(const ExperimentSpec& spec, const ValidateOptions& options = {});

}  // namespace gfcd::experiment
