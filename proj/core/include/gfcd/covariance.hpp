#pragma once

#include <cstdint>
#include <vector>

#include "gfcd/linalg.hpp"

namespace gfcd {

/// Inputs of the covariance-fitting problem
///   minimize_{gamma >= 0}  log det S(gamma) + tr(S(gamma)^{-1} Sigma_hat),
///   S(gamma) = Q diag(gamma) Q^H + noise_var I.
/// Sigma_hat already carries the 1/M normalization.
struct Problem {
  CMatrix sequences;   // Q, L x NR
  CMatrix sigma_hat;   // L x L, Hermitian
  double noise_var = 1.0;

  Eigen::Index seq_len() const { return sequences.rows(); }
  Eigen::Index num_coords() const { return sequences.cols(); }
};

inline constexpr int kDefaultRefactorPeriod = 500;

/// Decision vector together with the maintained covariance, its inverse,
/// log-determinant and objective value.
///
/// Only the lower triangles of `sigma` and `sigma_inv` are maintained; use
/// full_sigma() / full_sigma_inv() for dense Hermitian copies.
struct SolverState {
  RVector gamma;
  CMatrix sigma;
  CMatrix sigma_inv;
  double logdet_sigma = 0.0;
  double objective_F = 0.0;
  std::int64_t iter_count = 0;
  int updates_since_refactor = 0;
  int refactor_period = kDefaultRefactorPeriod;
  std::int64_t refactor_count = 0;

  CMatrix full_sigma() const;
  CMatrix full_sigma_inv() const;
};

/// One coordinate's closed-form minimizer and the decrease it achieves.
struct UpdateStep {
  Eigen::Index coord = 0;
  double delta = 0.0;
  double reward = 0.0;
  double quad = 0.0;        // c = a^H S^{-1} a
  double quad_data = 0.0;   // g = a^H S^{-1} Sigma_hat S^{-1} a
  CVector inv_col;          // S^{-1} a, reused by apply_update
};

struct ScanEntry {
  double delta = 0.0;
  double reward = 0.0;
};

/// gamma = 0, S = noise_var I.
SolverState init_state(const Problem& problem, int refactor_period = kDefaultRefactorPeriod);

/// State at an arbitrary non-negative gamma, built by dense factorization.
SolverState state_from_gamma(const Problem& problem, const RVector& gamma,
                             int refactor_period = kDefaultRefactorPeriod);

/// log det S + tr(S^{-1} Sigma_hat) from the cached inverse and log-det.
double objective(const SolverState& state, const CMatrix& sigma_hat);

/// Objective evaluated from scratch (Cholesky of S(gamma)).
double dense_objective(const Problem& problem, const RVector& gamma);

/// Reward of coordinate step parameters: g d / (1 + d c) - log(1 + d c).
double step_reward(double quad, double quad_data, double delta);

/// Clamped minimizer max((g - c) / c^2, -gamma_k).
double step_delta(double quad, double quad_data, double gamma_k);

/// Throws NumericalError if a^H S^{-1} a is not positive.
UpdateStep coordinate_step(const SolverState& state, const Problem& problem, Eigen::Index k);

/// Applies gamma_k += delta with rank-one updates of S, S^{-1}, log det S and
/// F, refactorizing every refactor_period updates.
void apply_update(SolverState& state, const Problem& problem, const UpdateStep& step);

/// Reward of the same coordinate at the post-update state, from the
/// rank-one identities S'^{-1} a = S^{-1} a / (1 + delta c).
ScanEntry post_update_entry(const UpdateStep& step, double gamma_k_after);

/// coordinate_step for every coordinate, without mutating the state.
std::vector<ScanEntry> full_reward_scan(const SolverState& state, const Problem& problem);

/// Recomputes S^{-1}, log det S (and F) from S by Cholesky factorization.
void refactorize(SolverState& state, const Problem& problem);

/// max_ij |S S^{-1} - I|
double inverse_residual(const SolverState& state);

}  // namespace gfcd
