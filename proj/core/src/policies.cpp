#include "gfcd/policies.hpp"

#include <cmath>

#include "gfcd/beta.hpp"
#include "gfcd/errors.hpp"

namespace gfcd {

void BernoulliPolicyConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("bernoulli policy: epsilon must lie in [0, 1]");
  if (refresh_period < 0) throw ConfigError("bernoulli policy: refresh_period must be >= 1 (or 0 for auto)");
}

void ThompsonPolicyConfig::validate() const {
  if (num_arms < 1) throw ConfigError("thompson policy: num_arms must be >= 1");
  if (refresh_period < 0) throw ConfigError("thompson policy: refresh_period must be >= 1 (or 0 for auto)");
  if (!(prior_alpha > 0.0) || !(prior_beta > 0.0)) throw ConfigError("thompson policy: priors must be positive");
  if (!(kappa_max >= 0.0)) throw ConfigError("thompson policy: kappa_max must be non-negative");
}

std::string policy_name(const PolicyConfig& policy) {
  struct Visitor {
    std::string operator()(const RandomPolicyConfig&) const { return "random"; }
    std::string operator()(const BernoulliPolicyConfig&) const { return "bernoulli"; }
    std::string operator()(const ThompsonPolicyConfig&) const { return "thompson"; }
  };
  return std::visit(Visitor{}, policy);
}

int resolve_refresh_period(int configured, Eigen::Index num_coords) {
  if (configured > 0) return configured;
  return static_cast<int>(std::max<Eigen::Index>(1, (num_coords + 1) / 2));
}

ThompsonState ThompsonState::from_config(const ThompsonPolicyConfig& cfg, Eigen::Index num_coords) {
  cfg.validate();
  ThompsonState ts;
  ts.alpha.assign(static_cast<std::size_t>(cfg.num_arms), cfg.prior_alpha);
  ts.beta.assign(static_cast<std::size_t>(cfg.num_arms), cfg.prior_beta);
  ts.refresh_period = resolve_refresh_period(cfg.refresh_period, num_coords);
  ts.kappa_max = cfg.kappa_max;
  return ts;
}

Eigen::Index select_random(Eigen::Index num_coords, RngStream& rng) {
  return static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(num_coords)));
}

Eigen::Index greedy_coordinate(const RewardCache& cache) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < cache.r_bar.size(); ++k)
    if (cache.r_bar[k] > cache.r_bar[best]) best = k;
  return static_cast<Eigen::Index>(best);
}

Selection select_bernoulli(const RewardCache& cache, const BernoulliPolicyConfig& cfg, RngStream& rng) {
  Selection s;
  s.greedy = rng.bernoulli(cfg.epsilon);
  s.coord = s.greedy ? greedy_coordinate(cache)
                     : select_random(static_cast<Eigen::Index>(cache.r_bar.size()), rng);
  return s;
}

ThompsonSelection thompson_round(const ThompsonState& ts, const RewardCache& cache, RngStream& rng) {
  ThompsonSelection s;
  s.nu = -1.0;
  for (int i = 0; i < ts.num_arms(); ++i) {
    const double nu = sample_beta(ts.alpha[i], ts.beta[i], rng);
    if (nu > s.nu) {
      s.nu = nu;
      s.arm = i;
    }
  }
  s.greedy = rng.bernoulli(s.nu);
  s.coord = s.greedy ? greedy_coordinate(cache)
                     : select_random(static_cast<Eigen::Index>(cache.r_bar.size()), rng);
  return s;
}

void thompson_update(ThompsonState& ts, int arm, double nu, bool greedy, double reward, double objective_F) {
  double kappa = 0.0;
  if (reward > 0.0) {
    const double mag = std::abs(objective_F);
    kappa = mag > 0.0 ? std::min(reward / mag, ts.kappa_max) : ts.kappa_max;
  }
  if (!(kappa > 0.0)) return;
  const auto j = static_cast<std::size_t>(arm);
  if (greedy)
    ts.alpha[j] += nu * kappa;
  else
    ts.beta[j] += (1.0 - nu) * kappa;
}

void refresh_cache(RewardCache& cache, const std::vector<ScanEntry>& scan, std::int64_t t) {
  cache.r_bar.resize(scan.size());
  for (std::size_t k = 0; k < scan.size(); ++k) cache.r_bar[k] = scan[k].reward;
  cache.last_full_refresh = t;
  ++cache.full_refreshes;
}

}  // namespace gfcd
