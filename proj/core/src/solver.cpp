#include "gfcd/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gfcd/errors.hpp"

namespace gfcd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// coordinate_step with one refactorization retry on numerical trouble.
UpdateStep checked_step(SolverState& state, const Problem& problem, Eigen::Index k) {
  try {
    return coordinate_step(state, problem, k);
  } catch (const NumericalError&) {
    refactorize(state, problem);
    return coordinate_step(state, problem, k);
  }
}

std::vector<ScanEntry> checked_scan(SolverState& state, const Problem& problem) {
  try {
    return full_reward_scan(state, problem);
  } catch (const NumericalError&) {
    refactorize(state, problem);
    return full_reward_scan(state, problem);
  }
}

bool stop_reached(const Trace& trace, const StopRule& stop) {
  const auto t = static_cast<std::int64_t>(trace.records.size());
  if (t < stop.window) return false;
  const double now = trace.records.back().F;
  const std::int64_t past_idx = t - stop.window;  // 0 means the initial point
  const double past = past_idx == 0 ? trace.initial_F : trace.records[static_cast<std::size_t>(past_idx - 1)].F;
  const double diff = std::abs(now - past);
  const double scale = std::abs(past);
  return scale > 0.0 ? diff / scale <= stop.rel_tol : diff <= stop.rel_tol;
}

}  // namespace

void StopRule::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("stop rule: rel_tol must be positive");
  if (max_iters < 1) throw ConfigError("stop rule: max_iters must be >= 1");
  if (window < 1) throw ConfigError("stop rule: window must be >= 1");
}

RunResult run(const Problem& problem, const PolicyConfig& policy, const StopRule& stop, RngStream& rng,
              const RunOptions& options) {
  stop.validate();
  if (problem.sigma_hat.rows() != problem.seq_len() || problem.sigma_hat.cols() != problem.seq_len())
    throw DomainError("run: sample covariance shape does not match the sequence length");
  if (problem.num_coords() < 1) throw DomainError("run: no coordinates");

  const auto start = Clock::now();
  const Eigen::Index nr = problem.num_coords();
  SolverState state = init_state(problem, options.refactor_period);

  RunResult out;
  Trace& trace = out.trace;
  trace.initial_F = state.objective_F;
  trace.records.reserve(static_cast<std::size_t>(std::min<std::int64_t>(stop.max_iters, 1 << 20)));

  const auto* bern = std::get_if<BernoulliPolicyConfig>(&policy);
  const auto* thom = std::get_if<ThompsonPolicyConfig>(&policy);
  if (bern) bern->validate();
  ThompsonState ts;
  if (thom) ts = ThompsonState::from_config(*thom, nr);
  const bool bandit = bern || thom;
  const int refresh = bern ? resolve_refresh_period(bern->refresh_period, nr) : ts.refresh_period;

  RewardCache cache;
  if (bandit) {
    refresh_cache(cache, checked_scan(state, problem), 0);
    ++trace.reward_scans;
  }

  for (std::int64_t t = 1; t <= stop.max_iters; ++t) {
    if (bandit && t % refresh == 0) {
      refresh_cache(cache, checked_scan(state, problem), t);
      ++trace.reward_scans;
    }

    TraceRecord rec;
    rec.t = t;
    ThompsonSelection tsel;
    if (bern) {
      const Selection s = select_bernoulli(cache, *bern, rng);
      rec.k = s.coord;
      rec.greedy = s.greedy;
    } else if (thom) {
      tsel = thompson_round(ts, cache, rng);
      rec.k = tsel.coord;
      rec.greedy = tsel.greedy;
      rec.arm = tsel.arm;
      rec.nu = tsel.nu;
    } else {
      rec.k = select_random(nr, rng);
    }

    const UpdateStep step = checked_step(state, problem, rec.k);
    if (thom) thompson_update(ts, tsel.arm, tsel.nu, tsel.greedy, step.reward, state.objective_F);
    apply_update(state, problem, step);
    if (bandit) cache.r_bar[static_cast<std::size_t>(rec.k)] = post_update_entry(step, state.gamma[rec.k]).reward;

    rec.delta = step.delta;
    rec.reward = step.reward;
    rec.F = state.objective_F;
    rec.elapsed_s = seconds_since(start);
    trace.records.push_back(rec);

    if (stop_reached(trace, stop)) {
      trace.converged = true;
      break;
    }
  }

  trace.iterations = static_cast<std::int64_t>(trace.records.size());
  trace.final_F = state.objective_F;
  trace.total_seconds = seconds_since(start);
  out.gamma = std::move(state.gamma);
  return out;
}

std::vector<double> suboptimality_series(const Trace& trace, double F_star) {
  std::vector<double> out;
  out.reserve(trace.records.size() + 1);
  out.push_back(std::max(0.0, trace.initial_F - F_star));
  for (const auto& r : trace.records) out.push_back(std::max(0.0, r.F - F_star));
  return out;
}

RVector replay_gamma(const Trace& trace, Eigen::Index num_coords, std::int64_t t) {
  RVector g = RVector::Zero(num_coords);
  const auto n = std::min<std::int64_t>(t, static_cast<std::int64_t>(trace.records.size()));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& r = trace.records[static_cast<std::size_t>(i)];
    const double v = g[r.k] + r.delta;
    g[r.k] = v > 0.0 ? v : 0.0;
  }
  return g;
}

double reference_objective(const Problem& problem, RngStream& rng) {
  const Eigen::Index nr = problem.num_coords();
  StopRule stop;
  stop.rel_tol = 1e-12;
  stop.max_iters = 50 * static_cast<std::int64_t>(nr);
  stop.window = static_cast<int>(nr);
  const RunResult res = run(problem, BernoulliPolicyConfig{}, stop, rng);
  double best = res.trace.initial_F;
  for (const auto& r : res.trace.records) best = std::min(best, r.F);
  return best - 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(best));
}

}  // namespace gfcd
