#include "gfcd/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gfcd/adc.hpp"
#include "gfcd/detect.hpp"
#include "gfcd/errors.hpp"
#include "gfcd/experiment/csv.hpp"
#include "gfcd/scenario_io.hpp"
#include "gfcd/trace_io.hpp"

namespace gfcd::experiment {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

std::string cell_name(const CellResult& c) { return c.policy + "_seed" + std::to_string(c.seed); }

json summary_json(const CellResult& c, const ExperimentSpec& spec) {
  json pl = json::array();
  for (Eigen::Index i = 0; i < c.truth.pathloss.size(); ++i) pl.push_back(c.truth.pathloss[i]);
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); };
  return json{{"format", "gfcd-summary"},
              {"version", "1.0"},
              {"policy", c.policy},
              {"seed", c.seed},
              {"seed_index", c.seed_index},
              {"adc", c.adc},
              {"config_digest", c.digest},
              {"status", status_name(c.status)},
              {"error", c.error},
              {"initial_F", num(c.initial_F)},
              {"final_F", num(c.final_F)},
              {"F_star", num(c.F_star)},
              {"iterations", c.iterations},
              {"reward_scans", c.reward_scans},
              {"converged", c.converged},
              {"wall_s", c.wall_s},
              {"p_md", num(c.p_md)},
              {"p_fa", num(c.p_fa)},
              {"num_devices", c.truth.pathloss.size()},
              {"messages_per_device", c.truth.messages_per_device},
              {"num_coords", c.truth.pathloss.size() * c.truth.messages_per_device},
              {"refactor_period", spec.refactor_period},
              {"truth",
               {{"active_devices", c.truth.active_devices},
                {"message_index", c.truth.message_index},
                {"pathloss", std::move(pl)}}}};
}

void write_cell(const fs::path& out, const CellResult& c, const ExperimentSpec& spec) {
  if (spec.emit.traces && c.status == CellStatus::Ok) {
    std::ostringstream os;
    write_trace_csv(os, c.trace);
    write_file_atomic((out / "traces" / (cell_name(c) + ".csv")).string(), os.str());
  }
  if (spec.emit.summaries)
    write_file_atomic((out / "summaries" / (cell_name(c) + ".json")).string(), summary_json(c, spec).dump(1) + "\n");
}

void fail_cell(CellResult& c, CellStatus status, const std::string& what) {
  c.status = status;
  c.error = what;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  c.final_F = c.initial_F = nan;
  c.p_md = c.p_fa = nan;
}

}  // namespace

const char* status_name(CellStatus s) {
  switch (s) {
    case CellStatus::Ok:
      return "ok";
    case CellStatus::NumericalError:
      return "numerical_error";
    case CellStatus::Error:
      return "error";
  }
  return "error";
}

int ExperimentResult::failed_cells() const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.status != CellStatus::Ok; }));
}

bool ExperimentResult::any_numerical_failure() const {
  return std::any_of(cells.begin(), cells.end(),
                     [](const CellResult& c) { return c.status == CellStatus::NumericalError; });
}

std::vector<std::string> policy_labels(const ExperimentSpec& spec) {
  std::map<std::string, int> count;
  for (const auto& p : spec.policies) ++count[policy_name(p)];
  std::vector<std::string> out;
  for (std::size_t i = 0; i < spec.policies.size(); ++i) {
    const auto name = policy_name(spec.policies[i]);
    out.push_back(count[name] > 1 ? name + "-" + std::to_string(i) : name);
  }
  return out;
}

SeedProblem build_seed_problem(const ExperimentSpec& spec, std::uint64_t seed) {
  SeedProblem sp;
  if (spec.scenario_file.empty()) {
    SystemConfig cfg = spec.scenario;
    cfg.master_seed = seed;
    sp.scenario = generate_scenario(cfg);
  } else {
    sp.scenario = load_scenario(spec.scenario_file);
  }
  const Scenario& sc = sp.scenario;
  if (spec.adc) {
    const CMatrix yq = quantize_complex_matrix(sc.received, *spec.adc);
    sp.problem = quantized_problem(sc.sequences, sample_covariance(yq), sc.noise_var, *spec.adc);
  } else {
    sp.problem.sequences = sc.sequences;
    sp.problem.sigma_hat = sample_covariance(sc.received);
    sp.problem.noise_var = sc.noise_var;
  }
  return sp;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunnerOptions& options) {
  if (spec.policies.empty()) throw ConfigError("experiment: at least one policy is required");
  if (spec.num_seeds < 1) throw ConfigError("experiment: num_seeds must be >= 1");
  const auto labels = policy_labels(spec);
  const StopRule stop = spec.resolved_stop();
  const std::size_t np = spec.policies.size();
  const auto ns = static_cast<std::size_t>(spec.num_seeds);
  const fs::path out(spec.output_dir);

  ExperimentResult result;
  result.cells.resize(np * ns);
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t s = 0; s < ns; ++s) {
      CellResult& c = result.cells[p * ns + s];
      c.policy_index = p;
      c.policy = labels[p];
      c.seed_index = static_cast<int>(s);
      c.seed = spec.seed_of(static_cast<int>(s));
      c.adc = spec.adc_label();
      c.digest = cell_digest(spec, spec.policies[p], c.seed);
      c.F_star = std::numeric_limits<double>::quiet_NaN();
    }

  std::mutex io_mutex;
  auto run_seed = [&](std::size_t s) {
    const std::uint64_t seed = spec.seed_of(static_cast<int>(s));
    SeedProblem sp;
    double f_star = std::numeric_limits<double>::quiet_NaN();
    try {
      sp = build_seed_problem(spec, seed);
      if (spec.reference) {
        RngStream ref_rng = RngStream::derive(seed, "reference");
        f_star = reference_objective(sp.problem, ref_rng);
      }
    } catch (const std::exception& e) {
      const bool numerical = dynamic_cast<const NumericalError*>(&e) != nullptr;
      for (std::size_t p = 0; p < np; ++p)
        fail_cell(result.cells[p * ns + s], numerical ? CellStatus::NumericalError : CellStatus::Error, e.what());
      return;
    }
    for (std::size_t p = 0; p < np; ++p) {
      CellResult& c = result.cells[p * ns + s];
      c.F_star = f_star;
      c.truth = sp.scenario.truth;
      try {
        RngStream rng = RngStream::derive(seed, "policy");
        RunResult rr = run(sp.problem, spec.policies[p], stop, rng, RunOptions{spec.refactor_period});
        const DetectionMetrics m = evaluate_detection(rr.gamma, sp.scenario.truth);
        c.initial_F = rr.trace.initial_F;
        c.final_F = rr.trace.final_F;
        c.iterations = rr.trace.iterations;
        c.reward_scans = rr.trace.reward_scans;
        c.converged = rr.trace.converged;
        c.wall_s = rr.trace.total_seconds;
        c.p_md = m.p_md;
        c.p_fa = m.p_fa;
        c.trace = std::move(rr.trace);
      } catch (const NumericalError& e) {
        fail_cell(c, CellStatus::NumericalError, e.what());
      } catch (const std::exception& e) {
        fail_cell(c, CellStatus::Error, e.what());
      }
      if (options.write_outputs) {
        std::lock_guard<std::mutex> lock(io_mutex);
        write_cell(out, c, spec);
      }
      if (!options.keep_traces) c.trace = Trace{};
    }
  };

  int jobs = options.jobs;
  if (jobs < 1) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), ns));
  if (jobs <= 1) {
    for (std::size_t s = 0; s < ns; ++s) run_seed(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t s = next++; s < ns; s = next++) run_seed(s);
      });
    for (auto& w : workers) w.join();
  }

  if (options.write_outputs) {
    if (spec.emit.aggregate_csv) {
      write_file_atomic((out / "aggregate.csv").string(), aggregate_csv(result));
      write_file_atomic((out / "timing.csv").string(), timing_csv(result));
    }
    write_file_atomic((out / "spec.yaml").string(), serialize_spec(spec));
  }
  return result;
}

std::string aggregate_csv(const ExperimentResult& result) {
  std::string out = "# gfcd-aggregate v1.0\n";
  out += kAggregateHeader;
  out += '\n';
  for (const auto& c : result.cells) {
    std::string status = status_name(c.status);
    if (!c.error.empty()) status += ": " + one_line(c.error);
    out += csv_line({c.policy, std::to_string(c.seed), c.adc, format_double(c.final_F), format_double(c.F_star),
                     std::to_string(c.iterations), std::to_string(c.reward_scans), c.converged ? "1" : "0",
                     format_double(c.p_md), format_double(c.p_fa), c.digest, status});
  }
  return out;
}

std::string timing_csv(const ExperimentResult& result) {
  std::string out = "# gfcd-timing v1.0\n";
  out += kTimingHeader;
  out += '\n';
  for (const auto& c : result.cells)
    out += csv_line({c.policy, std::to_string(c.seed), format_double(c.wall_s)});
  return out;
}

}  // namespace gfcd::experiment
