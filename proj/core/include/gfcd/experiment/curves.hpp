#pragma once

#include <cstdint>
#include <vector>

#include "gfcd/model.hpp"
#include "gfcd/solver.hpp"

namespace gfcd::experiment {

struct DetectionPoint {
  std::int64_t t = 0;
  double elapsed_s = 0.0;
  double p_md = 1.0;
  double p_fa = 0.0;
};

/// Detection metrics along a trace (threshold calibrated to the true K),
/// evaluated at t = 0, every `stride` iterations and at the last iteration.
std::vector<DetectionPoint> detection_curve(const Trace& trace, const GroundTruth& truth, std::int64_t stride);

/// First t with P_md <= level, or -1 when the run never gets there.
std::int64_t iterations_to_pmd(const Trace& trace, const GroundTruth& truth, double level);

/// First t with F_t - F_star <= fraction * (F_0 - F_star), or -1.
std::int64_t iterations_to_suboptimality(const Trace& trace, double F_star, double fraction);

/// elapsed_s of record t (1-based); 0 for t = 0.
double elapsed_at(const Trace& trace, std::int64_t t);

}  // namespace gfcd::experiment
