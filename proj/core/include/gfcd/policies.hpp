#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gfcd/covariance.hpp"
#include "gfcd/rng.hpp"

namespace gfcd {

/// Last observed reward per coordinate.
struct RewardCache {
  std::vector<double> r_bar;
  std::int64_t last_full_refresh = -1;
  std::int64_t full_refreshes = 0;
};

struct RandomPolicyConfig {
  bool operator==(const RandomPolicyConfig&) const = default;
};

struct BernoulliPolicyConfig {
  double epsilon = 0.6;
  /// Full reward refresh period B; 0 selects ceil(NR / 2).
  int refresh_period = 0;
  void validate() const;
  bool operator==(const BernoulliPolicyConfig&) const = default;
};

struct ThompsonPolicyConfig {
  int num_arms = 10;
  /// Full reward refresh period E; 0 selects ceil(NR / 2).
  int refresh_period = 0;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  /// Upper clamp of the posterior increment weight r / |F|.
  double kappa_max = 1.0;
  void validate() const;
  bool operator==(const ThompsonPolicyConfig&) const = default;
};

using PolicyConfig = std::variant<RandomPolicyConfig, BernoulliPolicyConfig, ThompsonPolicyConfig>;

/// "random", "bernoulli" or "thompson".
std::string policy_name(const PolicyConfig& policy);

/// ceil(num_coords / 2) when `configured` is 0, otherwise `configured`.
int resolve_refresh_period(int configured, Eigen::Index num_coords);

/// Beta posteriors of the inner q-armed bandit.
struct ThompsonState {
  std::vector<double> alpha;
  std::vector<double> beta;
  int refresh_period = 1;
  double kappa_max = 1.0;

  static ThompsonState from_config(const ThompsonPolicyConfig& cfg, Eigen::Index num_coords);
  int num_arms() const { return static_cast<int>(alpha.size()); }
};

struct Selection {
  Eigen::Index coord = 0;
  bool greedy = false;
};

struct ThompsonSelection {
  Eigen::Index coord = 0;
  int arm = 0;
  double nu = 0.0;
  bool greedy = false;
};

Eigen::Index select_random(Eigen::Index num_coords, RngStream& rng);

/// argmax of the cache, lowest index on ties.
Eigen::Index greedy_coordinate(const RewardCache& cache);

/// With probability epsilon the cached argmax, otherwise uniform.
Selection select_bernoulli(const RewardCache& cache, const BernoulliPolicyConfig& cfg, RngStream& rng);

/// Sample nu_i ~ Beta(alpha_i, beta_i), play j = argmax nu, then act
/// greedily with probability nu_j.
ThompsonSelection thompson_round(const ThompsonState& ts, const RewardCache& cache, RngStream& rng);

/// Posterior increment with weight kappa = clamp(reward / |F|, 0, kappa_max):
/// alpha_j += nu kappa after a greedy round, beta_j += (1 - nu) kappa otherwise.
void thompson_update(ThompsonState& ts, int arm, double nu, bool greedy, double reward, double objective_F);

/// Overwrite every entry from a full scan taken at iteration t.
void refresh_cache(RewardCache& cache, const std::vector<ScanEntry>& scan, std::int64_t t);

}  // namespace gfcd
