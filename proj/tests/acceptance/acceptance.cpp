// Acceptance run: one PASS/FAIL line per criterion.
//
// Criteria listed with --known-failure are still evaluated and printed as
// FAIL, but do not affect the exit status.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gfcd/adc.hpp"
#include "gfcd/beta.hpp"
#include "gfcd/covariance.hpp"
#include "gfcd/experiment/csv.hpp"
#include "gfcd/experiment/curves.hpp"
#include "gfcd/experiment/runner.hpp"
#include "gfcd/experiment/spec.hpp"
#include "gfcd/policies.hpp"
#include "oracles/dense_oracle.hpp"
#include "support/fixtures.hpp"

using namespace gfcd;
using namespace gfcd::experiment;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool passed = false;
  std::string detail;
};

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every trace produced by the experiment criteria, for the monotonicity check.
std::vector<Trace> g_traces;

ExperimentResult run_cells(const ExperimentSpec& spec) {
  ExperimentResult res = run_experiment(spec, {1, false, true});
  for (const auto& c : res.cells)
    if (c.status == CellStatus::Ok) g_traces.push_back(c.trace);
  return res;
}

ExperimentSpec desk(int seq_len = 40) {
  ExperimentSpec s = parse_spec("preset: desk\n");
  s.scenario.seq_len = seq_len;
  return s;
}

std::vector<const CellResult*> cells_of(const ExperimentResult& r, const std::string& policy) {
  std::vector<const CellResult*> out;
  for (const auto& c : r.cells)
    if (c.policy == policy) out.push_back(&c);
  return out;
}

std::vector<double> final_pmd(const ExperimentResult& r) {
  std::vector<double> v;
  for (const auto& c : r.cells) v.push_back(c.status == CellStatus::Ok ? c.p_md : 1.0);
  return v;
}

int failed(const ExperimentResult& r) { return r.failed_cells(); }

// 1. Reward identity against a dense LU objective.
Outcome reward_identity() {
  const Problem p = fixtures::random_problem(16, 40, 101);
  SolverState st = init_state(p);
  RngStream rng(102);
  double worst = 0.0;
  double prev = oracle::objective(p.sequences, st.gamma, p.noise_var, p.sigma_hat);
  for (int t = 0; t < 10000; ++t) {
    const UpdateStep step = coordinate_step(st, p, static_cast<Eigen::Index>(rng.uniform_index(40)));
    apply_update(st, p, step);
    const double now = oracle::objective(p.sequences, st.gamma, p.noise_var, p.sigma_hat);
    worst = std::max(worst, std::abs(now - (prev - step.reward)) / std::max(1.0, std::abs(prev)));
    prev = now;
  }
  return {worst <= 1e-9, fmt("max scaled error %.3e over 10000 updates (tol 1e-9)", worst)};
}

// 2. Closed-form delta vs golden-section minimisation of the 1-D profile.
Outcome delta_oracle() {
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const Problem p = fixtures::random_problem(8, 20, 200 + s);
    const RVector g = fixtures::random_gamma(20, 300 + s);
    const SolverState st = state_from_gamma(p, g);
    for (Eigen::Index k = 0; k < 20; ++k) {
      const double d = coordinate_step(st, p, k).delta;
      worst = std::max(worst, std::abs(d - oracle::oracle_delta(p.sequences, g, p.noise_var, p.sigma_hat, k)));
    }
  }
  return {worst <= 1e-6, fmt("max |delta - oracle| %.3e over 50 states x 20 coordinates (tol 1e-6)", worst)};
}

// 3. Inverse drift with rank-one maintenance and periodic refactorisation.
Outcome inverse_drift() {
  const Problem p = fixtures::random_problem(32, 64, 401);
  SolverState st = init_state(p, 500);
  RngStream rng(402);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    apply_update(st, p, coordinate_step(st, p, static_cast<Eigen::Index>(rng.uniform_index(64))));
    worst = std::max(worst, inverse_residual(st));
  }
  return {worst <= 1e-6, fmt("max ||S S^-1 - I||_max %.3e over 10000 updates, %lld refactorizations (tol 1e-6)",
                             worst, static_cast<long long>(st.refactor_count))};
}

// 5. Iterations to 1e-3 of the initial suboptimality.
Outcome convergence_ordering(const ExperimentResult& r) {
  std::map<std::string, double> med;
  for (const std::string pol : {"random", "bernoulli", "thompson"}) {
    std::vector<double> t;
    for (const auto* c : cells_of(r, pol)) {
      const auto hit = c->status == CellStatus::Ok ? iterations_to_suboptimality(c->trace, c->F_star, 1e-3) : -1;
      t.push_back(hit < 0 ? kInf : static_cast<double>(hit));
    }
    med[pol] = median(t);
  }
  const double ratio = med["bernoulli"] / med["random"];
  const bool ok = failed(r) == 0 && ratio <= 0.8 && med["thompson"] <= med["bernoulli"];
  return {ok, fmt("median T random %.1f, bernoulli %.1f, thompson %.1f; bernoulli/random %.3f (<= 0.8)",
                  med["random"], med["bernoulli"], med["thompson"], ratio)};
}

// 6. Median wall time to P_md <= 0.1; each cell timed as the fastest of `reps` runs.
Outcome walltime_ordering(const ExperimentResult& first, int reps) {
  std::map<std::pair<std::string, std::uint64_t>, double> best;
  std::map<std::pair<std::string, std::uint64_t>, std::int64_t> hit_at;
  auto absorb = [&](const ExperimentResult& r) {
    for (const auto& c : r.cells) {
      const auto key = std::make_pair(c.policy, c.seed);
      if (!hit_at.count(key))
        hit_at[key] = c.status == CellStatus::Ok ? iterations_to_pmd(c.trace, c.truth, 0.1) : -1;
      const auto hit = hit_at[key];
      const double tsec = hit < 0 ? kInf : elapsed_at(c.trace, hit);
      auto it = best.find(key);
      best[key] = it == best.end() ? tsec : std::min(it->second, tsec);
    }
  };
  absorb(first);
  ExperimentSpec spec = desk();
  spec.reference = false;
  for (int i = 1; i < reps; ++i) absorb(run_cells(spec));
  std::map<std::string, double> med;
  for (const std::string pol : {"random", "bernoulli", "thompson"}) {
    std::vector<double> v;
    for (const auto& [key, t] : best)
      if (key.first == pol) v.push_back(t);
    med[pol] = median(v);
  }
  const bool ok = failed(first) == 0 && med["thompson"] <= med["bernoulli"] && med["bernoulli"] <= med["random"];
  return {ok, fmt("median seconds to P_md <= 0.1: thompson %.3e, bernoulli %.3e, random %.3e (best of %d)",
                  med["thompson"], med["bernoulli"], med["random"], reps)};
}

// 7. Longer sequences detect better.
Outcome length_monotonicity() {
  const ExperimentResult r30 = run_cells(desk(30));
  const ExperimentResult r60 = run_cells(desk(60));
  const double m30 = median(final_pmd(r30)), m60 = median(final_pmd(r60));
  return {failed(r30) + failed(r60) == 0 && m60 < m30,
          fmt("median P_md L=60 %.4f vs L=30 %.4f (mean %.4f vs %.4f)", m60, m30, mean(final_pmd(r60)),
              mean(final_pmd(r30)))};
}

// 8. Three-bit ADCs track the unquantized pipeline; one bit is worse.
Outcome adc_fidelity(const ExperimentResult& unq) {
  ExperimentSpec s = desk();
  s.reference = false;
  s.adc = QuantizerConfig{3, 0.5, BussgangFormula::Standard};
  const ExperimentResult r3 = run_cells(s);
  s.adc->bits = 1;
  const ExperimentResult r1 = run_cells(s);
  const auto p0 = final_pmd(unq), p3 = final_pmd(r3), p1 = final_pmd(r1);
  const double m0 = median(p0), m3 = median(p3), m1 = median(p1);
  const bool close = std::abs(m3 - m0) <= 0.05;
  // Strictly worse in the median, or in the mean when the medians coincide.
  const bool worse = m1 > m3 || (m1 == m3 && mean(p1) > mean(p3));
  return {failed(unq) + failed(r3) + failed(r1) == 0 && close && worse,
          fmt("median P_md unquantized %.4f, b3 %.4f, b1 %.4f; mean b3 %.4f, b1 %.4f", m0, m3, m1, mean(p3),
              mean(p1))};
}

// 9. Sampling distributions of the policies.
Outcome distributions() {
  std::vector<std::string> bad;
  RewardCache cache;
  cache.r_bar.assign(50, 0.0);
  cache.r_bar[7] = 1.0;
  RngStream rng(901);
  int greedy = 0;
  for (int i = 0; i < 100000; ++i) greedy += select_bernoulli(cache, BernoulliPolicyConfig{0.6, 0}, rng).greedy;
  const double freq = greedy / 1e5;
  if (std::abs(freq - 0.6) > 0.01) bad.push_back("bernoulli");

  std::vector<double> u(100000);
  for (auto& x : u) x = sample_beta(1.0, 1.0, rng);
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double n = static_cast<double>(u.size());
    ks = std::max({ks, (i + 1) / n - u[i], u[i] - i / n});
  }
  if (ks > 0.01) bad.push_back("beta");

  ThompsonState ts = ThompsonState::from_config(ThompsonPolicyConfig{}, 100);
  double lowest = kInf;
  for (int i = 0; i < 1000000; ++i) {
    const int arm = static_cast<int>(rng.uniform_index(10));
    const double nu = rng.uniform();
    const double reward = rng.uniform() < 0.1 ? -rng.uniform() : 1e3 * rng.uniform();
    const double F = (rng.uniform() - 0.5) * 1e3;
    thompson_update(ts, arm, nu, rng.bernoulli(nu), reward, F);
  }
  for (int j = 0; j < ts.num_arms(); ++j) lowest = std::min({lowest, ts.alpha[j], ts.beta[j]});
  if (!(lowest > 0.0)) bad.push_back("thompson");
  return {bad.empty(), fmt("greedy frequency %.4f (0.6 +- 0.01), Beta(1,1) KS %.4f (<= 0.01), min posterior "
                           "parameter %.3g after 1e6 updates (> 0)",
                           freq, ks, lowest)};
}

// 10. Quantizer properties for b = 1..4.
Outcome quantizer_suite() {
  std::vector<std::string> bad;
  const auto q = [](int b) { return QuantizerConfig{b, 0.5, BussgangFormula::Standard}; };
  if (quantize_real(0.3, q(2)) != 0.25) bad.push_back("b2 0.3");
  if (quantize_real(0.7, q(1)) != 0.25 || quantize_real(-0.7, q(1)) != -0.25) bad.push_back("b1 +-0.7");
  if (quantize_real(-10.0, q(2)) != -0.75) bad.push_back("b2 -10");
  RngStream rng(1001);
  for (int b = 1; b <= 4; ++b) {
    std::vector<double> xs(20000);
    for (auto& x : xs) x = (rng.uniform() - 0.5) * 6.0 * (1 << b) * 0.5;
    for (int z = -(1 << b); z <= (1 << b); ++z) xs.push_back(0.5 * z);
    std::sort(xs.begin(), xs.end());
    std::set<double> levels;
    double prev = -kInf;
    bool idem = true, mono = true;
    for (double x : xs) {
      const double y = quantize_real(x, q(b));
      idem &= quantize_real(y, q(b)) == y;
      mono &= y >= prev;
      prev = y;
      levels.insert(y);
    }
    if (!idem) bad.push_back(fmt("b%d idempotence", b));
    if (!mono) bad.push_back(fmt("b%d monotonicity", b));
    if (static_cast<int>(levels.size()) != (1 << b)) bad.push_back(fmt("b%d levels %zu", b, levels.size()));
  }
  std::string d = "examples, idempotence, monotonicity, 2^b levels for b = 1..4";
  for (const auto& s : bad) d += "; failed " + s;
  return {bad.empty(), d};
}

// 11. Byte-identical aggregate files across reruns.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "gfcd_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> bad;
  ExperimentSpec base = desk();
  base.num_seeds = 5;
  std::vector<ExperimentSpec> specs{base, base};
  specs[1].adc = QuantizerConfig{2, 0.5, BussgangFormula::Standard};
  specs[1].scenario.placement = Placement::UniformDisk;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string text[2];
    for (int rep = 0; rep < 2; ++rep) {
      specs[i].output_dir = (root / fmt("spec%zu_run%d", i, rep)).string();
      const ExperimentResult r = run_experiment(specs[i], {rep == 0 ? 1 : 2, true, true});
      for (const auto& c : r.cells) g_traces.push_back(c.trace);
      text[rep] = read_file((fs::path(specs[i].output_dir) / "aggregate.csv").string());
    }
    if (text[0] != text[1] || text[0].empty()) bad.push_back(fmt("spec %zu", i));
  }
  fs::remove_all(root);
  return {bad.empty(), bad.empty() ? "aggregate.csv identical across reruns for 2 specs (jobs 1 vs 2)"
                                   : "aggregate.csv differs for " + bad.front()};
}

// 4. Non-increasing objective in every trace collected above.
Outcome monotone(const std::vector<Trace>& traces) {
  double worst = 0.0;
  std::size_t records = 0;
  for (const auto& tr : traces) {
    double prev = tr.initial_F;
    for (const auto& r : tr.records) {
      worst = std::max(worst, (r.F - prev) / std::max(1.0, std::abs(prev)));
      prev = r.F;
      ++records;
    }
  }
  return {worst <= 1e-9, fmt("%zu traces, %zu records, max scaled increase %.3e (tol 1e-9)", traces.size(), records,
                             worst)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gfcd acceptance criteria"};
  std::vector<int> known;
  std::vector<int> only;
  int reps = 3;
  app.add_option("--known-failure", known, "Criterion reported but excluded from the exit status");
  app.add_option("--only", only, "Run only these criteria (4 then covers the traces of those run)");
  app.add_option("--timing-reps", reps, "Repeated runs per cell for the wall-time criterion")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const auto wanted = [&](int id) { return only.empty() || std::count(only.begin(), only.end(), id); };
  int unexpected = 0;
  const auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    if (!wanted(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool is_known = std::count(known.begin(), known.end(), id) > 0;
    std::printf("%s [%d] %s: %s (%.1f s)%s\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
                !o.passed && is_known ? " [known]" : "");
    std::fflush(stdout);
    if (!o.passed && !is_known) ++unexpected;
  };

  report(1, "reward identity", reward_identity);
  report(2, "delta oracle", delta_oracle);
  report(3, "inverse drift", inverse_drift);

  ExperimentResult desk_runs;
  if (wanted(5) || wanted(6) || wanted(8)) {
    desk_runs = run_cells(desk());
  }
  report(5, "convergence-rate ordering", [&] { return convergence_ordering(desk_runs); });
  report(6, "wall-time ordering", [&] { return walltime_ordering(desk_runs, reps); });
  report(7, "detection vs sequence length", length_monotonicity);
  report(8, "ADC fidelity", [&] { return adc_fidelity(desk_runs); });
  report(9, "policy distributions", distributions);
  report(10, "quantizer suite", quantizer_suite);
  report(11, "determinism", determinism);
  report(4, "monotone descent", [] { return monotone(g_traces); });
  return unexpected == 0 ? 0 : 1;
}
