#include "gfcd/experiment/curves.hpp"

#include <algorithm>

#include "gfcd/detect.hpp"

namespace gfcd::experiment {

namespace {

Eigen::Index coords_of(const GroundTruth& truth) {
  return truth.pathloss.size() * truth.messages_per_device;
}

// Walks the trace and calls visit(t, gamma) at each t for which want(t) holds.
template <class Want, class Visit>
void walk(const Trace& trace, const GroundTruth& truth, Want want, Visit visit) {
  RVector g = RVector::Zero(coords_of(truth));
  if (want(0) && !visit(std::int64_t{0}, g)) return;
  for (const auto& r : trace.records) {
    const double v = g[r.k] + r.delta;
    g[r.k] = v > 0.0 ? v : 0.0;
    if (want(r.t) && !visit(r.t, g)) return;
  }
}

}  // namespace

double elapsed_at(const Trace& trace, std::int64_t t) {
  if (t <= 0 || trace.records.empty()) return 0.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), trace.records.size()) - 1;
  return trace.records[i].elapsed_s;
}

std::vector<DetectionPoint> detection_curve(const Trace& trace, const GroundTruth& truth, std::int64_t stride) {
  stride = std::max<std::int64_t>(1, stride);
  const auto last = static_cast<std::int64_t>(trace.records.size());
  std::vector<DetectionPoint> out;
  walk(
      trace, truth, [&](std::int64_t t) { return t % stride == 0 || t == last; },
      [&](std::int64_t t, const RVector& g) {
        const DetectionMetrics m = evaluate_detection(g, truth);
        out.push_back({t, elapsed_at(trace, t), m.p_md, m.p_fa});
        return true;
      });
  return out;
}

std::int64_t iterations_to_pmd(const Trace& trace, const GroundTruth& truth, double level) {
  std::int64_t hit = -1;
  walk(
      trace, truth, [](std::int64_t) { return true; },
      [&](std::int64_t t, const RVector& g) {
        if (evaluate_detection(g, truth).p_md <= level) {
          hit = t;
          return false;
        }
        return true;
      });
  return hit;
}

std::int64_t iterations_to_suboptimality(const Trace& trace, double F_star, double fraction) {
  const auto series = suboptimality_series(trace, F_star);
  const double target = fraction * series.front();
  for (std::size_t t = 0; t < series.size(); ++t)
    if (series[t] <= target) return static_cast<std::int64_t>(t);
  return -1;
}

}  // namespace gfcd::experiment
