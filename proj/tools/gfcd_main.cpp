// gfcd: run experiment specs, build figure tables, check invariants.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gfcd/adc.hpp"
#include "gfcd/errors.hpp"
#include "gfcd/experiment/csv.hpp"
#include "gfcd/experiment/figures.hpp"
#include "gfcd/experiment/runner.hpp"
#include "gfcd/experiment/spec.hpp"
#include "gfcd/experiment/validate.hpp"

namespace ex = gfcd::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSpec = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> num_seeds;
  std::optional<std::string> out;
  std::optional<std::string> adc_bits;
  std::optional<double> adc_step;
  std::optional<std::string> adc_formula;
};

void add_overrides(CLI::App* cmd, Overrides& o, bool with_out) {
  cmd->add_option("--seed", o.seed, "Scenario master seed");
  cmd->add_option("--num-seeds", o.num_seeds, "Number of seeds")->check(CLI::PositiveNumber);
  if (with_out) cmd->add_option("--out", o.out, "Output directory");
  auto* g = cmd->add_option_group("adc", "Low-resolution ADC");
  g->add_option("--adc-bits", o.adc_bits, "Bits per real dimension, or a comma list per antenna; 'none' disables");
  g->add_option("--adc-step", o.adc_step, "Quantizer step size")->check(CLI::PositiveNumber);
  g->add_option("--adc-formula", o.adc_formula, "Bussgang covariance form")
      ->check(CLI::IsMember({"standard", "literal"}));
}

void apply(const Overrides& o, ex::ExperimentSpec& spec) {
  if (o.seed) spec.scenario.master_seed = *o.seed;
  if (o.num_seeds) spec.num_seeds = *o.num_seeds;
  if (o.out) spec.output_dir = *o.out;
  if (o.adc_bits && *o.adc_bits == "none") {
    spec.adc.reset();
    return;
  }
  if (!o.adc_bits && !o.adc_step && !o.adc_formula) return;
  gfcd::QuantizerConfig q = spec.adc.value_or(gfcd::QuantizerConfig{});
  std::vector<int> bits{q.bits};
  if (o.adc_bits) {
    bits.clear();
    std::stringstream ss(*o.adc_bits);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        bits.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw gfcd::ConfigError("--adc-bits: not an integer: '" + item + "'");
      }
    }
  }
  if (o.adc_step) q.step = *o.adc_step;
  if (o.adc_formula)
    q.formula = *o.adc_formula == "literal" ? gfcd::BussgangFormula::Literal : gfcd::BussgangFormula::Standard;
  spec.adc = gfcd::QuantizerConfig::uniform(bits, q.step, q.formula);
}

int cmd_solve(const std::string& spec_path, const Overrides& o, int jobs) {
  ex::ExperimentSpec spec = ex::load_spec(spec_path);
  apply(o, spec);
  const ex::ExperimentResult res = ex::run_experiment(spec, {jobs, true, false});
  const int failed = res.failed_cells();
  std::cout << res.cells.size() << " cells, " << failed << " failed; results in " << spec.output_dir << "\n";
  for (const auto& c : res.cells)
    if (c.status != ex::CellStatus::Ok)
      std::cerr << c.policy << " seed " << c.seed << ": " << ex::status_name(c.status) << ": " << c.error << "\n";
  if (res.any_numerical_failure()) return kExitNumerical;
  return failed ? kExitFailure : kExitOk;
}

int cmd_figures(const ex::FigureOptions& opts) {
  for (const auto& path : ex::write_figures(opts)) std::cout << path << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& spec_path, const Overrides& o, const std::string& dump) {
  ex::ExperimentSpec spec = ex::load_spec(spec_path);
  apply(o, spec);
  ex::ValidateOptions vo;
  vo.dump_scenario = dump;
  const ex::ValidationReport rep = ex::validate_spec(spec, vo);
  for (const auto& c : rep.checks)
    std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << " (" << c.detail << ")\n";
  return rep.passed() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinate-descent activity and data detection for grant-free random access"};
  app.require_subcommand(1);

  std::string spec_path;
  Overrides solve_o, validate_o;
  int jobs = 1;
  auto* solve = app.add_subcommand("solve", "Run every (policy, seed) cell of a spec");
  solve->add_option("--spec", spec_path, "Experiment spec (YAML)")->required()->check(CLI::ExistingFile);
  solve->add_option("--jobs", jobs, "Concurrent seeds (0 = all cores)")->check(CLI::NonNegativeNumber);
  add_overrides(solve, solve_o, true);

  ex::FigureOptions fig;
  auto* figures = app.add_subcommand("figures", "Build figure tables from solve outputs");
  figures->add_option("--input", fig.inputs, "Solve output directory (repeatable)")->required();
  figures->add_option("--out", fig.output_dir, "Output directory");
  figures->add_flag("--svg", fig.svg, "Also write SVG line plots of the medians");
  figures->add_option("--grid", fig.grid_points, "Grid points for median curves")->check(CLI::PositiveNumber);

  std::string dump;
  auto* validate = app.add_subcommand("validate", "Check scenario and solver invariants without solving");
  validate->add_option("--spec", spec_path, "Experiment spec (YAML)")->required()->check(CLI::ExistingFile);
  validate->add_option("--dump-scenario", dump, "Write the first seed's scenario as JSON");
  add_overrides(validate, validate_o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(spec_path, solve_o, jobs);
    if (*figures) return cmd_figures(fig);
    if (*validate) return cmd_validate(spec_path, validate_o, dump);
  } catch (const ex::SpecError& e) {
    std::cerr << e.what() << "\n";
    return kExitSpec;
  } catch (const ex::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const gfcd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const gfcd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
