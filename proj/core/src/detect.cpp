#include "gfcd/detect.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "gfcd/errors.hpp"

namespace gfcd {

namespace {

int num_blocks(const RVector& gamma_hat, int r) {
  if (r < 1 || gamma_hat.size() % r != 0) throw DomainError("detection: gamma length is not a multiple of R");
  return static_cast<int>(gamma_hat.size() / r);
}

}  // namespace

DetectionResult decode(const RVector& gamma_hat, int messages_per_device, double threshold) {
  const int r = messages_per_device;
  const int n = num_blocks(gamma_hat, r);
  DetectionResult res;
  res.messages_per_device = r;
  res.threshold = threshold;
  res.indicators.assign(static_cast<std::size_t>(gamma_hat.size()), 0);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int j = 1; j < r; ++j)
      if (gamma_hat[i * r + j] > gamma_hat[i * r + best]) best = j;
    if (gamma_hat[i * r + best] >= threshold) {
      res.indicators[static_cast<std::size_t>(i * r + best)] = 1;
      res.declared_active.push_back(i);
      res.decoded_message.push_back(best);
    }
  }
  return res;
}

double calibrate_threshold(const RVector& gamma_hat, int messages_per_device, int target_active) {
  const int r = messages_per_device;
  const int n = num_blocks(gamma_hat, r);
  if (target_active < 0 || target_active > n) throw DomainError("calibrate_threshold: target outside [0, N]");
  if (target_active == 0) return std::numeric_limits<double>::infinity();
  std::vector<double> maxima(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) maxima[static_cast<std::size_t>(i)] = gamma_hat.segment(i * r, r).maxCoeff();
  std::nth_element(maxima.begin(), maxima.begin() + (target_active - 1), maxima.end(), std::greater<>());
  const double cut = maxima[static_cast<std::size_t>(target_active - 1)];
  // A zero estimate is never a detection.
  return cut > 0.0 ? cut : std::numeric_limits<double>::denorm_min();
}

double missed_detection_prob(const GroundTruth& truth, const DetectionResult& result) {
  const auto k = truth.active_devices.size();
  if (k == 0) return 0.0;
  std::size_t missed = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const int dev = truth.active_devices[i];
    const auto it = std::lower_bound(result.declared_active.begin(), result.declared_active.end(), dev);
    if (it == result.declared_active.end() || *it != dev) {
      ++missed;
      continue;
    }
    const auto pos = static_cast<std::size_t>(it - result.declared_active.begin());
    if (result.decoded_message[pos] != truth.message_index[i]) ++missed;
  }
  return static_cast<double>(missed) / static_cast<double>(k);
}

double false_alarm_prob(const GroundTruth& truth, const DetectionResult& result) {
  const auto n = static_cast<std::size_t>(truth.pathloss.size());
  const auto k = truth.active_devices.size();
  if (n <= k) return 0.0;
  std::size_t alarms = 0;
  for (int dev : result.declared_active)
    if (!std::binary_search(truth.active_devices.begin(), truth.active_devices.end(), dev)) ++alarms;
  return static_cast<double>(alarms) / static_cast<double>(n - k);
}

DetectionMetrics evaluate_detection(const RVector& gamma_hat, const GroundTruth& truth) {
  const int r = truth.messages_per_device;
  DetectionMetrics m;
  m.threshold = calibrate_threshold(gamma_hat, r, static_cast<int>(truth.active_devices.size()));
  const DetectionResult res = decode(gamma_hat, r, m.threshold);
  m.p_md = missed_detection_prob(truth, res);
  m.p_fa = false_alarm_prob(truth, res);
  m.declared = static_cast<int>(res.declared_active.size());
  return m;
}

}  // namespace gfcd
