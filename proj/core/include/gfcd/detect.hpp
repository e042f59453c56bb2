#pragma once

#include <vector>

#include "gfcd/linalg.hpp"
#include "gfcd/model.hpp"

namespace gfcd {

struct DetectionResult {
  std::vector<char> indicators;         // length N*R, at most one 1 per device block
  double threshold = 0.0;
  std::vector<int> declared_active;     // sorted device indices
  std::vector<int> decoded_message;     // per declared device, in [0, R)
  int messages_per_device = 2;
};

/// Per device: the block argmax (lowest index on ties) is declared when it
/// reaches the threshold.
DetectionResult decode(const RVector& gamma_hat, int messages_per_device, double threshold);

/// Largest threshold that admits at least `target_active` devices: the
/// target_active-th largest block maximum (+inf for zero). Never returns a
/// non-positive threshold, so all-zero blocks are not declared.
double calibrate_threshold(const RVector& gamma_hat, int messages_per_device, int target_active);

/// Fraction of truly active devices that are not declared, or declared
/// with the wrong message. Zero when nothing is active.
double missed_detection_prob(const GroundTruth& truth, const DetectionResult& result);

/// Fraction of truly inactive devices that are declared active.
double false_alarm_prob(const GroundTruth& truth, const DetectionResult& result);

struct DetectionMetrics {
  double p_md = 0.0;
  double p_fa = 0.0;
  double threshold = 0.0;
  int declared = 0;
};

/// Threshold calibrated to the true K, then decode and score.
DetectionMetrics evaluate_detection(const RVector& gamma_hat, const GroundTruth& truth);

}  // namespace gfcd
