#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "gfcd/detect.hpp"
#include "gfcd/errors.hpp"
#include "gfcd/experiment/csv.hpp"
#include "gfcd/experiment/curves.hpp"
#include "gfcd/experiment/figures.hpp"
#include "gfcd/experiment/runner.hpp"
#include "gfcd/experiment/spec.hpp"
#include "gfcd/experiment/validate.hpp"
#include "gfcd/scenario_io.hpp"
#include "gfcd/trace_io.hpp"

using namespace gfcd;
using namespace gfcd::experiment;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gfcd_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

int error_line(const std::string& text) {
  try {
    parse_spec(text, "t.yaml");
  } catch (const SpecError& e) {
    return e.line();
  }
  return -1;
}

ExperimentSpec quick_desk(const fs::path& out, int seeds) {
  ExperimentSpec s = parse_spec("preset: desk\n");
  s.num_seeds = seeds;
  s.output_dir = out.string();
  return s;
}

}  // namespace

TEST_CASE("defaults carry the large-cell simulation values") {
  const ExperimentSpec s = parse_spec("");
  CHECK(s.scenario.num_devices == 1500);
  CHECK(s.scenario.num_active == 50);
  CHECK(s.scenario.seq_len == 200);
  CHECK(s.scenario.num_antennas == 16);
  CHECK(s.scenario.bits_per_message == 1);
  CHECK(s.stop.rel_tol == 1e-6);
  CHECK(s.stop.max_iters == 1500);
  CHECK(s.stop.window == 1);
  REQUIRE(s.policies.size() == 3);
  CHECK(std::get<BernoulliPolicyConfig>(s.policies[1]).epsilon == 0.6);
  CHECK(std::get<ThompsonPolicyConfig>(s.policies[2]).num_arms == 10);
  CHECK_FALSE(s.adc.has_value());
  CHECK(s.num_seeds == 1);
}

TEST_CASE("desk preset") {
  const ExperimentSpec s = parse_spec("preset: desk\nscenario:\n  seq_len: 60\n");
  CHECK(s.scenario.num_devices == 100);
  CHECK(s.scenario.num_active == 10);
  CHECK(s.scenario.seq_len == 60);
  CHECK(s.resolved_stop().window == 200);
  CHECK(s.resolved_stop().max_iters == 50 * 200);
  CHECK(s.reference);
}

TEST_CASE("spec round trip is the identity") {
  const char* texts[] = {
      "",
      "preset: desk\n",
      "preset: desk\nadc:\n  bits: 1\n  step: 0.25\n  formula: literal\nnum_seeds: 4\n",
      "scenario:\n  num_devices: 20\n  num_active: 2\n  seq_len: 8\n  placement: uniform_disk\n"
      "  master_seed: 18446744073709551615\n"
      "policies:\n  - type: bernoulli\n    epsilon: 0.35\n    refresh_period: 17\n"
      "  - type: thompson\n    num_arms: 4\n    prior_alpha: 2.5\n    kappa_max: 0.125\n"
      "stop:\n  rel_tol: 1e-9\n  max_iters: 12345\n  window: epoch\n"
      "emit:\n  traces: false\nreference: true\nrefactor_period: 64\noutput_dir: some/dir\n",
  };
  for (const char* t : texts) {
    CAPTURE(t);
    const ExperimentSpec a = parse_spec(t);
    const std::string once = serialize_spec(a);
    const ExperimentSpec b = parse_spec(once);
    CHECK(a == b);
    CHECK(serialize_spec(b) == once);
  }
}

TEST_CASE("spec diagnostics are anchored to the offending line") {
  CHECK(error_line("preset: desk\nscenario:\n  num_devces: 3\n") == 3);
  CHECK(error_line("num_seeds: 2\nbogus: 1\n") == 2);
  CHECK(error_line("num_seeds: 0\n") == 1);
  CHECK(error_line("policies:\n  - type: greedy\n") == 2);
  CHECK(error_line("policies: []\n") == 1);
  CHECK(error_line("adc:\n  bits: [3, 3, 2]\n") == 2);
  CHECK(error_line("adc:\n  formula: lloyd\n") == 2);
  CHECK(error_line("stop:\n  rel_tol: -1\n") == 2);
  CHECK(error_line("scenario:\n  num_active: 2000\n") == 2);
  CHECK(error_line("num_seeds: [1\n") >= 1);
  CHECK(error_line("stop:\n  window: often\n") == 2);
  const ExperimentSpec ok = parse_spec("adc:\n  bits: [2, 2, 2, 2]\n");
  REQUIRE(ok.adc);
  CHECK(ok.adc->bits == 2);
  CHECK(ok.adc_label() == "b2");
  CHECK(parse_spec("scenario_file: ~\n").scenario_file.empty());
  CHECK(parse_spec("adc:\n  formula: literal\n").adc_label() == "b3-literal");
  try {
    parse_spec("x: 1\n", "my.yaml");
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(std::string(e.what()).rfind("my.yaml:1:1:", 0) == 0);
  }
}

TEST_CASE("cell digests identify cells") {
  const ExperimentSpec s = parse_spec("preset: desk\n");
  std::set<std::string> seen;
  for (const auto& p : s.policies)
    for (int i = 0; i < 5; ++i) seen.insert(cell_digest(s, p, s.seed_of(i)));
  CHECK(seen.size() == 15);
  CHECK(cell_digest(s, s.policies[0], 3) == cell_digest(s, s.policies[0], 3));
  ExperimentSpec t = s;
  t.stop.rel_tol = 1e-7;
  CHECK(cell_digest(t, t.policies[0], 3) != cell_digest(s, s.policies[0], 3));
  // Bookkeeping fields that do not change a cell's result leave it alone.
  t = s;
  t.num_seeds = 99;
  t.output_dir = "elsewhere";
  CHECK(cell_digest(t, t.policies[0], 3) == cell_digest(s, s.policies[0], 3));
}

TEST_CASE("three policies by twenty seeds give sixty deterministic rows") {
  const fs::path a = scratch("agg_a"), b = scratch("agg_b");
  ExperimentSpec s = quick_desk(a, 20);
  s.reference = false;
  const ExperimentResult r1 = run_experiment(s, {1, true, false});
  CHECK(r1.cells.size() == 60);
  CHECK(r1.failed_cells() == 0);
  const std::string agg = slurp(a / "aggregate.csv");
  const CsvTable table = parse_csv(agg, "gfcd-aggregate", 1);
  CHECK(table.rows.size() == 60);
  CHECK(fs::exists(a / "timing.csv"));
  CHECK(fs::exists(a / "spec.yaml"));
  CHECK(parse_spec(slurp(a / "spec.yaml")) == s);
  CHECK(fs::exists(a / "traces" / "thompson_seed20.csv"));
  CHECK(fs::exists(a / "summaries" / "random_seed1.json"));

  s.output_dir = b.string();
  run_experiment(s, {3, true, false});
  CHECK(slurp(b / "aggregate.csv") == agg);
  // Sorted by (policy, seed).
  CHECK(table.rows.front()[0] == "random");
  CHECK(table.rows.front()[1] == "1");
  CHECK(table.rows.back()[0] == "thompson");
  CHECK(table.rows.back()[1] == "20");
}

TEST_CASE("unquantized and quantized cells carry their ADC label") {
  const fs::path out = scratch("adc");
  ExperimentSpec s = quick_desk(out, 2);
  s.reference = false;
  s.adc = QuantizerConfig{3, 0.5, BussgangFormula::Standard};
  const auto res = run_experiment(s, {1, true, false});
  for (const auto& c : res.cells) {
    CHECK(c.adc == "b3");
    CHECK(c.status == CellStatus::Ok);
  }
}

TEST_CASE("scalar toy spec writes a single one-iteration trace") {
  const fs::path dir = scratch("toy");
  Scenario sc;
  sc.config.num_devices = 1;
  sc.config.bits_per_message = 0;
  sc.config.seq_len = 1;
  sc.config.num_antennas = 1;
  sc.config.num_active = 1;
  sc.sequences = CMatrix::Ones(1, 1);
  sc.received = CMatrix::Constant(1, 1, std::sqrt(3.0));
  sc.noise_var = 1.0;
  sc.truth.messages_per_device = 1;
  sc.truth.active_devices = {0};
  sc.truth.message_index = {0};
  sc.truth.gamma_true = RVector::Ones(1);
  sc.truth.pathloss = RVector::Ones(1);
  save_scenario(sc, (dir / "toy.json").string());
  std::ofstream(dir / "toy.yaml") << "scenario_file: toy.json\npolicies:\n  - type: random\n"
                                     "stop:\n  max_iters: 1\noutput_dir: "
                                  << (dir / "out").string() << "\n";
  const ExperimentSpec s = load_spec((dir / "toy.yaml").string());
  const auto res = run_experiment(s, {1, true, true});
  REQUIRE(res.cells.size() == 1);
  CHECK(res.cells[0].iterations == 1);
  CHECK(res.cells[0].final_F == doctest::Approx(std::log(3.0) + 1.0));
  CHECK(res.cells[0].p_md == 0.0);
  std::size_t traces = 0;
  for (const auto& e : fs::directory_iterator(dir / "out" / "traces")) {
    ++traces;
    std::istringstream is(slurp(e.path()));
    CHECK(read_trace_csv(is).records.size() == 1);
  }
  CHECK(traces == 1);
}

TEST_CASE("failing cells are recorded and the rest continue") {
  const fs::path out = scratch("fail");
  ExperimentSpec s = quick_desk(out, 2);
  s.scenario_file = (out / "missing.json").string();
  const auto res = run_experiment(s, {1, true, false});
  CHECK(res.failed_cells() == 6);
  const CsvTable t = parse_csv(slurp(out / "aggregate.csv"), "gfcd-aggregate", 1);
  CHECK(t.rows.size() == 6);
  CHECK(t.rows[0][t.column("status")].rfind("error", 0) == 0);
}

TEST_CASE("figures from solve outputs") {
  const fs::path out = scratch("figs");
  ExperimentSpec s = quick_desk(out / "single", 3);
  s.policies = {BernoulliPolicyConfig{}};
  run_experiment(s, {1, true, false});
  FigureOptions fo;
  fo.inputs = {(out / "single").string()};
  fo.output_dir = (out / "f").string();
  fo.svg = true;
  const FigureSet set = build_figures(fo);
  CHECK(FigureSet::series_of(set.fig1).size() == 1);
  CHECK(FigureSet::series_of(set.fig2).size() == 1);
  const auto written = write_figures(fo);
  CHECK(written.size() == 8);
  const CsvTable t = parse_csv(slurp(out / "f" / "fig1_suboptimality.csv"), "gfcd-figure", 1);
  CHECK(t.header == std::vector<std::string>{"figure", "series", "seed", "x", "y"});
  bool median = false;
  for (const auto& row : t.rows) median |= row[2] == "median";
  CHECK(median);
  CHECK(slurp(out / "f" / "fig1_suboptimality.svg").find("<svg") == 0);
}

TEST_CASE("figures reject bad inputs") {
  const fs::path out = scratch("figs_bad");
  FigureOptions fo;
  fo.inputs = {(out / "nothing").string()};
  CHECK_THROWS_AS(build_figures(fo), SchemaError);
  fs::create_directories(out / "v2");
  std::ofstream(out / "v2" / "aggregate.csv") << "# gfcd-aggregate v2.0\npolicy,seed\n";
  fo.inputs = {(out / "v2").string()};
  CHECK_THROWS_AS(build_figures(fo), SchemaError);
  fs::create_directories(out / "cols");
  std::ofstream(out / "cols" / "aggregate.csv") << "# gfcd-aggregate v1.0\npolicy,seed,status\nrandom,1,ok\n";
  fo.inputs = {(out / "cols").string()};
  try {
    build_figures(fo);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("missing column") != std::string::npos);
  }
}

TEST_CASE("csv helpers") {
  CHECK_THROWS_AS(parse_csv("", "x", 1), SchemaError);
  CHECK_THROWS_AS(parse_csv("# x v1.0\na,b\n1\n", "x", 1), SchemaError);
  const CsvTable t = parse_csv("# x v1.2\na,b\n1,2\n\n3,4\n", "x", 1);
  CHECK(t.rows.size() == 2);
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), SchemaError);
  CHECK(parse_double_field("nan") != parse_double_field("nan"));
  CHECK(parse_double_field("-2.5e-3") == -2.5e-3);
  CHECK_THROWS_AS(parse_double_field("2x"), SchemaError);
}

TEST_CASE("detection curve along a trace") {
  const fs::path out = scratch("curve");
  ExperimentSpec s = quick_desk(out, 1);
  s.policies = {BernoulliPolicyConfig{}};
  const auto res = run_experiment(s, {1, false, true});
  const auto& c = res.cells[0];
  const auto curve = detection_curve(c.trace, c.truth, 50);
  CHECK(curve.front().t == 0);
  CHECK(curve.front().p_md == 1.0);
  CHECK(curve.back().t == c.iterations);
  CHECK(curve.back().p_md == doctest::Approx(c.p_md));
  const auto hit = iterations_to_pmd(c.trace, c.truth, 0.1);
  REQUIRE(hit > 0);
  CHECK(evaluate_detection(replay_gamma(c.trace, 200, hit), c.truth).p_md <= 0.1);
  CHECK(evaluate_detection(replay_gamma(c.trace, 200, hit - 1), c.truth).p_md > 0.1);
  CHECK(iterations_to_suboptimality(c.trace, c.F_star, 1e-3) > 0);
}

TEST_CASE("validation suite passes on the presets") {
  ExperimentSpec s = parse_spec("preset: desk\n");
  const fs::path out = scratch("validate");
  ValidateOptions vo;
  vo.dump_scenario = (out / "scenario.json").string();
  const auto rep = validate_spec(s, vo);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  CHECK(load_scenario(vo.dump_scenario).config.num_devices == 100);
  s.adc = QuantizerConfig{2, 0.5, BussgangFormula::Standard};
  CHECK(validate_spec(s).passed());
}
