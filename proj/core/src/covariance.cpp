#include "gfcd/covariance.hpp"

#include <cmath>
#include <string>

#include "gfcd/errors.hpp"

namespace gfcd {

namespace {

constexpr double kSingularDenominator = 1e-12;

CMatrix build_sigma(const Problem& p, const RVector& gamma) {
  const Eigen::Index l = p.seq_len();
  CMatrix s = CMatrix::Identity(l, l) * p.noise_var;
  for (Eigen::Index k = 0; k < gamma.size(); ++k) {
    if (gamma[k] != 0.0) s.selfadjointView<Eigen::Lower>().rankUpdate(p.sequences.col(k), gamma[k]);
  }
  hermitize_from_lower(s);
  return s;
}

double real_trace_product(const CMatrix& a, const CMatrix& b) {
  // Re tr(A B) for Hermitian A, B.
  return (a.cwiseProduct(b.transpose())).sum().real();
}

}  // namespace

CMatrix SolverState::full_sigma() const {
  CMatrix s = sigma;
  hermitize_from_lower(s);
  return s;
}

CMatrix SolverState::full_sigma_inv() const {
  CMatrix s = sigma_inv;
  hermitize_from_lower(s);
  return s;
}

SolverState init_state(const Problem& problem, int refactor_period) {
  if (!(problem.noise_var > 0.0)) throw DomainError("init_state: noise variance must be positive");
  if (refactor_period < 1) throw DomainError("init_state: refactor period must be >= 1");
  const Eigen::Index l = problem.seq_len();
  SolverState st;
  st.refactor_period = refactor_period;
  st.gamma = RVector::Zero(problem.num_coords());
  st.sigma = CMatrix::Identity(l, l) * problem.noise_var;
  st.sigma_inv = CMatrix::Identity(l, l) / problem.noise_var;
  st.logdet_sigma = static_cast<double>(l) * std::log(problem.noise_var);
  st.objective_F = st.logdet_sigma + problem.sigma_hat.trace().real() / problem.noise_var;
  return st;
}

SolverState state_from_gamma(const Problem& problem, const RVector& gamma, int refactor_period) {
  if (!(problem.noise_var > 0.0)) throw DomainError("state_from_gamma: noise variance must be positive");
  if (gamma.size() != problem.num_coords()) throw DomainError("state_from_gamma: gamma length mismatch");
  if ((gamma.array() < 0.0).any()) throw DomainError("state_from_gamma: gamma must be non-negative");
  SolverState st;
  st.refactor_period = refactor_period;
  st.gamma = gamma;
  st.sigma = build_sigma(problem, gamma);
  refactorize(st, problem);
  st.refactor_count = 0;
  return st;
}

void refactorize(SolverState& state, const Problem& problem) {
  const CMatrix s = state.full_sigma();
  Eigen::LLT<CMatrix> llt(s);
  if (llt.info() != Eigen::Success) throw NumericalError("refactorize: covariance is not positive definite");
  const Eigen::Index l = s.rows();
  state.sigma_inv = llt.solve(CMatrix::Identity(l, l));
  hermitize_from_lower(state.sigma_inv);
  const CMatrix& lf = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l; ++i) logdet += std::log(lf(i, i).real());
  state.logdet_sigma = 2.0 * logdet;
  state.objective_F = state.logdet_sigma + real_trace_product(state.sigma_inv, problem.sigma_hat);
  state.updates_since_refactor = 0;
  ++state.refactor_count;
}

double objective(const SolverState& state, const CMatrix& sigma_hat) {
  return state.logdet_sigma + real_trace_product(state.full_sigma_inv(), sigma_hat);
}

double dense_objective(const Problem& problem, const RVector& gamma) {
  const CMatrix s = build_sigma(problem, gamma);
  Eigen::LLT<CMatrix> llt(s);
  if (llt.info() != Eigen::Success) throw NumericalError("dense_objective: covariance is not positive definite");
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) logdet += std::log(llt.matrixLLT()(i, i).real());
  const CMatrix x = llt.solve(problem.sigma_hat);
  return 2.0 * logdet + x.trace().real();
}

double step_delta(double quad, double quad_data, double gamma_k) {
  const double unconstrained = (quad_data - quad) / (quad * quad);
  return std::max(unconstrained, -gamma_k);
}

double step_reward(double quad, double quad_data, double delta) {
  if (delta == 0.0) return 0.0;
  const double x = delta * quad;
  const double r = quad_data * delta / (1.0 + x) - std::log1p(x);
  // Non-negative in exact arithmetic; drop sub-ulp negatives.
  return r > 0.0 ? r : 0.0;
}

UpdateStep coordinate_step(const SolverState& state, const Problem& problem, Eigen::Index k) {
  UpdateStep step;
  step.coord = k;
  const auto a = problem.sequences.col(k);
  step.inv_col.noalias() = state.sigma_inv.selfadjointView<Eigen::Lower>() * a;
  step.quad = a.dot(step.inv_col).real();
  if (!(step.quad > 0.0))
    throw NumericalError("coordinate_step: non-positive quadratic form at coordinate " + std::to_string(k));
  const CVector w = problem.sigma_hat * step.inv_col;
  step.quad_data = std::max(0.0, step.inv_col.dot(w).real());
  step.delta = step_delta(step.quad, step.quad_data, state.gamma[k]);
  step.reward = step_reward(step.quad, step.quad_data, step.delta);
  return step;
}

void apply_update(SolverState& state, const Problem& problem, const UpdateStep& step) {
  ++state.iter_count;
  if (step.delta == 0.0) return;
  const double x = step.delta * step.quad;
  const double denom = 1.0 + x;
  if (!(denom > kSingularDenominator)) throw NumericalError("apply_update: rank-one update is singular");

  const Eigen::Index k = step.coord;
  const double g_new = state.gamma[k] + step.delta;
  state.gamma[k] = g_new > 0.0 ? g_new : 0.0;
  state.sigma.selfadjointView<Eigen::Lower>().rankUpdate(problem.sequences.col(k), step.delta);
  state.sigma_inv.selfadjointView<Eigen::Lower>().rankUpdate(step.inv_col, -step.delta / denom);
  state.logdet_sigma += std::log1p(x);
  state.objective_F -= step.reward;

  if (++state.updates_since_refactor >= state.refactor_period) refactorize(state, problem);
}

ScanEntry post_update_entry(const UpdateStep& step, double gamma_k_after) {
  const double scale = 1.0 / (1.0 + step.delta * step.quad);
  const double c = step.quad * scale;
  const double g = step.quad_data * scale * scale;
  ScanEntry e;
  e.delta = step_delta(c, g, gamma_k_after);
  e.reward = step_reward(c, g, e.delta);
  return e;
}

std::vector<ScanEntry> full_reward_scan(const SolverState& state, const Problem& problem) {
  std::vector<ScanEntry> out(static_cast<std::size_t>(problem.num_coords()));
  for (Eigen::Index k = 0; k < problem.num_coords(); ++k) {
    const UpdateStep s = coordinate_step(state, problem, k);
    out[static_cast<std::size_t>(k)] = {s.delta, s.reward};
  }
  return out;
}

double inverse_residual(const SolverState& state) {
  const Eigen::Index l = state.sigma.rows();
  const CMatrix prod = state.full_sigma() * state.full_sigma_inv() - CMatrix::Identity(l, l);
  return prod.cwiseAbs().maxCoeff();
}

}  // namespace gfcd
