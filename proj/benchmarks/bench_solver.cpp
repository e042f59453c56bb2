#include <benchmark/benchmark.h>

#include "gfcd/adc.hpp"
#include "gfcd/covariance.hpp"
#include "gfcd/model.hpp"
#include "gfcd/policies.hpp"
#include "gfcd/solver.hpp"

namespace {

gfcd::Problem make_problem(int n, int l) {
  gfcd::SystemConfig cfg;
  cfg.num_devices = n;
  cfg.num_active = n / 10;
  cfg.seq_len = l;
  cfg.master_seed = 17;
  const gfcd::Scenario sc = gfcd::generate_scenario(cfg);
  return {sc.sequences, gfcd::sample_covariance(sc.received), sc.noise_var};
}

void BM_CoordinateStep(benchmark::State& state) {
  const auto p = make_problem(100, static_cast<int>(state.range(0)));
  const auto st = gfcd::init_state(p);
  Eigen::Index k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfcd::coordinate_step(st, p, k));
    k = (k + 1) % p.num_coords();
  }
}
BENCHMARK(BM_CoordinateStep)->Arg(40)->Arg(100)->Arg(200);

void BM_StepAndUpdate(benchmark::State& state) {
  const auto p = make_problem(100, static_cast<int>(state.range(0)));
  auto st = gfcd::init_state(p);
  gfcd::RngStream rng(3);
  for (auto _ : state) {
    const auto k = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(p.num_coords())));
    gfcd::apply_update(st, p, gfcd::coordinate_step(st, p, k));
  }
}
BENCHMARK(BM_StepAndUpdate)->Arg(40)->Arg(100)->Arg(200);

void BM_FullRewardScan(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)), 40);
  const auto st = gfcd::init_state(p);
  for (auto _ : state) benchmark::DoNotOptimize(gfcd::full_reward_scan(st, p));
  state.SetItemsProcessed(state.iterations() * p.num_coords());
}
BENCHMARK(BM_FullRewardScan)->Arg(100)->Arg(500);

void BM_Refactorize(benchmark::State& state) {
  const auto p = make_problem(100, static_cast<int>(state.range(0)));
  auto st = gfcd::init_state(p);
  for (auto _ : state) gfcd::refactorize(st, p);
}
BENCHMARK(BM_Refactorize)->Arg(40)->Arg(200);

void BM_BernoulliSelect(benchmark::State& state) {
  gfcd::RewardCache cache;
  gfcd::RngStream rng(5);
  cache.r_bar.resize(static_cast<std::size_t>(state.range(0)));
  for (auto& r : cache.r_bar) r = rng.uniform();
  const gfcd::BernoulliPolicyConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(gfcd::select_bernoulli(cache, cfg, rng));
}
BENCHMARK(BM_BernoulliSelect)->Arg(200)->Arg(3000);

void BM_ThompsonRound(benchmark::State& state) {
  gfcd::RewardCache cache;
  gfcd::RngStream rng(6);
  cache.r_bar.resize(200);
  for (auto& r : cache.r_bar) r = rng.uniform();
  auto ts = gfcd::ThompsonState::from_config(gfcd::ThompsonPolicyConfig{}, 200);
  for (auto _ : state) {
    const auto sel = gfcd::thompson_round(ts, cache, rng);
    gfcd::thompson_update(ts, sel.arm, sel.nu, sel.greedy, 0.1, -50.0);
  }
}
BENCHMARK(BM_ThompsonRound);

void BM_Solve(benchmark::State& state) {
  const auto p = make_problem(100, 40);
  gfcd::StopRule stop;
  stop.max_iters = 2000;
  stop.window = static_cast<int>(p.num_coords());
  const gfcd::PolicyConfig pols[] = {gfcd::RandomPolicyConfig{}, gfcd::BernoulliPolicyConfig{},
                                     gfcd::ThompsonPolicyConfig{}};
  const auto& pol = pols[state.range(0)];
  for (auto _ : state) {
    gfcd::RngStream rng(7);
    benchmark::DoNotOptimize(gfcd::run(p, pol, stop, rng));
  }
  state.SetLabel(gfcd::policy_name(pol));
}
BENCHMARK(BM_Solve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Quantize(benchmark::State& state) {
  gfcd::SystemConfig cfg;
  cfg.num_devices = 100;
  cfg.num_active = 10;
  const auto sc = gfcd::generate_scenario(cfg);
  const gfcd::QuantizerConfig q{static_cast<int>(state.range(0)), 0.5, gfcd::BussgangFormula::Standard};
  for (auto _ : state) benchmark::DoNotOptimize(gfcd::quantize_complex_matrix(sc.received, q));
}
BENCHMARK(BM_Quantize)->Arg(1)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
