#pragma once

#include <vector>

#include "gfcd/covariance.hpp"
#include "gfcd/linalg.hpp"

namespace gfcd {

enum class BussgangFormula {
  /// (1 - rho)^2 Sigma + rho (1 - rho) Diag(Sigma)
  Standard,
  /// rho^2 Sigma + rho (1 - rho) Diag(Sigma), scalar rho
  Literal,
};

/// Uniform b-bit mid-rise quantizer applied separately to real and
/// imaginary parts. Thresholds r_z = (z - 2^{b-1}) s for z = 1 .. 2^b - 1;
/// an input in (r_{z-1}, r_z] maps to r_z - s/2.
struct QuantizerConfig {
  int bits = 3;
  double step = 0.5;
  BussgangFormula formula = BussgangFormula::Standard;

  /// Distortion factor 2^{-2b}.
  double rho() const;
  int levels() const { return 1 << bits; }
  void validate() const;
  bool operator==(const QuantizerConfig&) const = default;

  /// Uniform resolution across antennas; throws ConfigError if the
  /// per-antenna bit depths differ.
  static QuantizerConfig uniform(const std::vector<int>& per_antenna_bits, double step,
                                 BussgangFormula formula);
};

double quantize_real(double x, const QuantizerConfig& cfg);

CMatrix quantize_complex_matrix(const CMatrix& y, const QuantizerConfig& cfg);

/// Quantizer output covariance for input covariance `sigma`.
CMatrix bussgang_covariance(const CMatrix& sigma, const QuantizerConfig& cfg);

/// Linear gain applied to the signal part by the surrogate model:
/// (1 - rho) in standard mode, rho in literal mode.
double bussgang_gain(const QuantizerConfig& cfg);

/// Surrogate parameters: S'(gamma) = gain^2 Q Gamma Q^H + effective_noise I.
struct QuantizedModel {
  double column_scale = 1.0;
  double effective_noise = 1.0;
};

/// effective_noise = gain^2 noise_var + rho (1 - rho) mean(diag(sigma_hat_q)).
QuantizedModel quantized_objective_model(double noise_var, const CMatrix& sigma_hat_q,
                                         const QuantizerConfig& cfg);

/// Problem over (gain * Q, sigma_hat_q, effective_noise), solvable with the
/// unmodified rank-one machinery.
Problem quantized_problem(const CMatrix& sequences, const CMatrix& sigma_hat_q, double noise_var,
                          const QuantizerConfig& cfg);

/// log det Sigma_q + tr(Sigma_q^{-1} sigma_hat_q) with the exact
/// (non-surrogate) quantizer covariance Sigma_q = B(Q Gamma Q^H + noise I).
double quantized_objective_exact(const CMatrix& sequences, const RVector& gamma, double noise_var,
                                 const CMatrix& sigma_hat_q, const QuantizerConfig& cfg);

}  // namespace gfcd
