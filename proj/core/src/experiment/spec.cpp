#include "gfcd/experiment/spec.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gfcd/errors.hpp"
#include "gfcd/rng.hpp"
#include "gfcd/trace_io.hpp"

namespace gfcd::experiment {

namespace {

std::string format_location(const std::string& source, int line, int column, const std::string& message) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    const YAML::Mark m = at.Mark();
    throw SpecError(source_, m.line + 1, m.column + 1, message);
  }

  void expect_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  // Reject keys outside `allowed`.
  void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) const {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
    }
  }

  template <class T>
  void read(const YAML::Node& map, const char* key, T& out) const {
    const YAML::Node n = map[key];
    if (!n) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, std::string("invalid value for '") + key + "'");
    }
  }

  // Integer or the literal `word`; returns true when `word` was given.
  template <class Int>
  bool read_int_or(const YAML::Node& map, const char* key, const char* word, Int& out) const {
    const YAML::Node n = map[key];
    if (!n) return false;
    if (n.IsScalar() && n.Scalar() == word) return true;
    try {
      out = n.as<Int>();
    } catch (const YAML::Exception&) {
      fail(n, std::string("'") + key + "' must be an integer or '" + word + "'");
    }
    return false;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

void apply_preset(ExperimentSpec& s, const std::string& name) {
  s.preset = name;
  if (name == "large") return;
  // desk
  s.scenario.num_devices = 100;
  s.scenario.num_active = 10;
  s.scenario.seq_len = 40;
  s.scenario.num_antennas = 16;
  s.scenario.bits_per_message = 1;
  s.max_iters_auto = true;
  s.stop_window_epoch = true;
  s.num_seeds = 20;
  s.reference = true;
}

std::vector<PolicyConfig> default_policies() {
  return {RandomPolicyConfig{}, BernoulliPolicyConfig{}, ThompsonPolicyConfig{}};
}

PolicyConfig read_policy(const Reader& rd, const YAML::Node& n) {
  rd.expect_map(n, "policy entry");
  const YAML::Node type = n["type"];
  if (!type) rd.fail(n, "policy entry needs a 'type'");
  const auto name = type.as<std::string>();
  if (name == "random") {
    rd.check_keys(n, {"type"}, "random policy");
    return RandomPolicyConfig{};
  }
  if (name == "bernoulli") {
    rd.check_keys(n, {"type", "epsilon", "refresh_period"}, "bernoulli policy");
    BernoulliPolicyConfig c;
    rd.read(n, "epsilon", c.epsilon);
    if (rd.read_int_or(n, "refresh_period", "auto", c.refresh_period)) c.refresh_period = 0;
    try {
      c.validate();
      if (n["refresh_period"] && c.refresh_period == 0 && n["refresh_period"].Scalar() != "auto")
        throw ConfigError("refresh_period must be >= 1 or 'auto'");
    } catch (const ConfigError& e) {
      rd.fail(n, e.what());
    }
    return c;
  }
  if (name == "thompson") {
    rd.check_keys(n, {"type", "num_arms", "refresh_period", "prior_alpha", "prior_beta", "kappa_max"},
                  "thompson policy");
    ThompsonPolicyConfig c;
    rd.read(n, "num_arms", c.num_arms);
    if (rd.read_int_or(n, "refresh_period", "auto", c.refresh_period)) c.refresh_period = 0;
    rd.read(n, "prior_alpha", c.prior_alpha);
    rd.read(n, "prior_beta", c.prior_beta);
    rd.read(n, "kappa_max", c.kappa_max);
    try {
      c.validate();
      if (n["refresh_period"] && c.refresh_period == 0 && n["refresh_period"].Scalar() != "auto")
        throw ConfigError("refresh_period must be >= 1 or 'auto'");
    } catch (const ConfigError& e) {
      rd.fail(n, e.what());
    }
    return c;
  }
  rd.fail(type, "unknown policy type '" + name + "' (expected random, bernoulli or thompson)");
}

QuantizerConfig read_adc(const Reader& rd, const YAML::Node& n) {
  rd.expect_map(n, "adc");
  rd.check_keys(n, {"bits", "step", "formula"}, "adc");
  std::vector<int> bits{3};
  double step = 0.5;
  BussgangFormula formula = BussgangFormula::Standard;
  if (const YAML::Node b = n["bits"]) {
    try {
      bits = b.IsSequence() ? b.as<std::vector<int>>() : std::vector<int>{b.as<int>()};
    } catch (const YAML::Exception&) {
      rd.fail(b, "adc.bits must be an integer or a list of integers");
    }
  }
  rd.read(n, "step", step);
  if (const YAML::Node f = n["formula"]) {
    const auto v = f.as<std::string>();
    if (v == "standard")
      formula = BussgangFormula::Standard;
    else if (v == "literal")
      formula = BussgangFormula::Literal;
    else
      rd.fail(f, "adc.formula must be 'standard' or 'literal'");
  }
  try {
    return QuantizerConfig::uniform(bits, step, formula);
  } catch (const ConfigError& e) {
    rd.fail(n, e.what());
  }
}

}  // namespace

SpecError::SpecError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(format_location(source, line, column, message)), line_(line), column_(column) {}

StopRule ExperimentSpec::resolved_stop() const {
  StopRule s = stop;
  const auto nr = static_cast<std::int64_t>(scenario.num_coords());
  if (stop_window_epoch) s.window = static_cast<int>(nr);
  if (max_iters_auto) s.max_iters = 50 * nr;
  return s;
}

std::string ExperimentSpec::adc_label() const {
  if (!adc) return "unquantized";
  std::string label = "b" + std::to_string(adc->bits);
  if (adc->formula == BussgangFormula::Literal) label += "-literal";
  return label;
}

ExperimentSpec parse_spec(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw SpecError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  ExperimentSpec s;
  s.policies = default_policies();
  if (!root || root.IsNull()) return s;
  rd.expect_map(root, "spec");
  rd.check_keys(root,
                {"preset", "scenario", "scenario_file", "policies", "stop", "adc", "num_seeds", "output_dir", "emit", "reference",
                 "refactor_period"},
                "spec");

  if (const YAML::Node p = root["preset"]) {
    const auto name = p.as<std::string>();
    if (name != "large" && name != "desk") rd.fail(p, "preset must be 'large' or 'desk'");
    apply_preset(s, name);
  }

  if (const YAML::Node sc = root["scenario"]) {
    rd.expect_map(sc, "scenario");
    rd.check_keys(sc,
                  {"num_devices", "bits_per_message", "seq_len", "num_antennas", "num_active", "tx_power_dbm",
                   "noise_power_dbm", "pathloss_const_db", "pathloss_slope", "cell_radius_km", "min_distance_km",
                   "placement", "normalize_power", "master_seed"},
                  "scenario");
    auto& c = s.scenario;
    rd.read(sc, "num_devices", c.num_devices);
    rd.read(sc, "bits_per_message", c.bits_per_message);
    rd.read(sc, "seq_len", c.seq_len);
    rd.read(sc, "num_antennas", c.num_antennas);
    rd.read(sc, "num_active", c.num_active);
    rd.read(sc, "tx_power_dbm", c.tx_power_dbm);
    rd.read(sc, "noise_power_dbm", c.noise_power_dbm);
    rd.read(sc, "pathloss_const_db", c.pathloss_const_db);
    rd.read(sc, "pathloss_slope", c.pathloss_slope);
    rd.read(sc, "cell_radius_km", c.cell_radius_km);
    rd.read(sc, "min_distance_km", c.min_distance_km);
    rd.read(sc, "normalize_power", c.normalize_power);
    rd.read(sc, "master_seed", c.master_seed);
    if (const YAML::Node pl = sc["placement"]) {
      const auto v = pl.as<std::string>();
      if (v == "cell_edge")
        c.placement = Placement::CellEdge;
      else if (v == "uniform_disk")
        c.placement = Placement::UniformDisk;
      else
        rd.fail(pl, "placement must be 'cell_edge' or 'uniform_disk'");
    }
    try {
      c.validate();
    } catch (const ConfigError& e) {
      rd.fail(sc, e.what());
    }
  }

  if (const YAML::Node pols = root["policies"]) {
    if (!pols.IsSequence() || pols.size() == 0) rd.fail(pols, "policies must be a non-empty list");
    s.policies.clear();
    for (const auto& p : pols) s.policies.push_back(read_policy(rd, p));
  }

  if (const YAML::Node st = root["stop"]) {
    rd.expect_map(st, "stop");
    rd.check_keys(st, {"rel_tol", "max_iters", "window"}, "stop");
    rd.read(st, "rel_tol", s.stop.rel_tol);
    if (st["max_iters"]) s.max_iters_auto = rd.read_int_or(st, "max_iters", "auto", s.stop.max_iters);
    if (st["window"]) s.stop_window_epoch = rd.read_int_or(st, "window", "epoch", s.stop.window);
    try {
      s.stop.validate();
    } catch (const ConfigError& e) {
      rd.fail(st, e.what());
    }
  }

  if (const YAML::Node a = root["adc"]) {
    if (a.IsNull())
      s.adc.reset();
    else
      s.adc = read_adc(rd, a);
  }

  if (const YAML::Node e = root["emit"]) {
    rd.expect_map(e, "emit");
    rd.check_keys(e, {"traces", "summaries", "aggregate_csv"}, "emit");
    rd.read(e, "traces", s.emit.traces);
    rd.read(e, "summaries", s.emit.summaries);
    rd.read(e, "aggregate_csv", s.emit.aggregate_csv);
  }

  if (root["scenario_file"] && !root["scenario_file"].IsNull()) rd.read(root, "scenario_file", s.scenario_file);
  rd.read(root, "num_seeds", s.num_seeds);
  if (s.num_seeds < 1) rd.fail(root["num_seeds"], "num_seeds must be >= 1");
  rd.read(root, "output_dir", s.output_dir);
  rd.read(root, "reference", s.reference);
  rd.read(root, "refactor_period", s.refactor_period);
  if (s.refactor_period < 1) rd.fail(root["refactor_period"], "refactor_period must be >= 1");
  return s;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SpecError(path, 0, 0, "cannot open spec file");
  std::stringstream ss;
  ss << is.rdbuf();
  ExperimentSpec spec = parse_spec(ss.str(), path);
  if (!spec.scenario_file.empty()) {
    const std::filesystem::path f(spec.scenario_file);
    if (f.is_relative()) spec.scenario_file = (std::filesystem::path(path).parent_path() / f).lexically_normal().string();
  }
  return spec;
}

namespace {

void emit_policy(YAML::Emitter& out, const PolicyConfig& p) {
  out << YAML::BeginMap << YAML::Key << "type" << YAML::Value << policy_name(p);
  auto period = [](int v) { return v == 0 ? std::string("auto") : std::to_string(v); };
  if (const auto* b = std::get_if<BernoulliPolicyConfig>(&p)) {
    out << YAML::Key << "epsilon" << YAML::Value << format_double(b->epsilon);
    out << YAML::Key << "refresh_period" << YAML::Value << period(b->refresh_period);
  } else if (const auto* t = std::get_if<ThompsonPolicyConfig>(&p)) {
    out << YAML::Key << "num_arms" << YAML::Value << t->num_arms;
    out << YAML::Key << "refresh_period" << YAML::Value << period(t->refresh_period);
    out << YAML::Key << "prior_alpha" << YAML::Value << format_double(t->prior_alpha);
    out << YAML::Key << "prior_beta" << YAML::Value << format_double(t->prior_beta);
    out << YAML::Key << "kappa_max" << YAML::Value << format_double(t->kappa_max);
  }
  out << YAML::EndMap;
}

void emit_scenario(YAML::Emitter& out, const SystemConfig& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "num_devices" << YAML::Value << c.num_devices;
  out << YAML::Key << "bits_per_message" << YAML::Value << c.bits_per_message;
  out << YAML::Key << "seq_len" << YAML::Value << c.seq_len;
  out << YAML::Key << "num_antennas" << YAML::Value << c.num_antennas;
  out << YAML::Key << "num_active" << YAML::Value << c.num_active;
  out << YAML::Key << "tx_power_dbm" << YAML::Value << format_double(c.tx_power_dbm);
  out << YAML::Key << "noise_power_dbm" << YAML::Value << format_double(c.noise_power_dbm);
  out << YAML::Key << "pathloss_const_db" << YAML::Value << format_double(c.pathloss_const_db);
  out << YAML::Key << "pathloss_slope" << YAML::Value << format_double(c.pathloss_slope);
  out << YAML::Key << "cell_radius_km" << YAML::Value << format_double(c.cell_radius_km);
  out << YAML::Key << "min_distance_km" << YAML::Value << format_double(c.min_distance_km);
  out << YAML::Key << "placement" << YAML::Value
      << (c.placement == Placement::CellEdge ? "cell_edge" : "uniform_disk");
  out << YAML::Key << "normalize_power" << YAML::Value << c.normalize_power;
  out << YAML::Key << "master_seed" << YAML::Value << c.master_seed;
  out << YAML::EndMap;
}

void emit_body(YAML::Emitter& out, const ExperimentSpec& s, const std::vector<PolicyConfig>& policies,
               const SystemConfig& scenario) {
  out << YAML::Key << "preset" << YAML::Value << s.preset;
  out << YAML::Key << "scenario" << YAML::Value;
  emit_scenario(out, scenario);
  out << YAML::Key << "scenario_file" << YAML::Value;
  if (s.scenario_file.empty())
    out << YAML::Null;
  else
    out << s.scenario_file;
  out << YAML::Key << "policies" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : policies) emit_policy(out, p);
  out << YAML::EndSeq;
  out << YAML::Key << "stop" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rel_tol" << YAML::Value << format_double(s.stop.rel_tol);
  out << YAML::Key << "max_iters" << YAML::Value
      << (s.max_iters_auto ? std::string("auto") : std::to_string(s.stop.max_iters));
  out << YAML::Key << "window" << YAML::Value
      << (s.stop_window_epoch ? std::string("epoch") : std::to_string(s.stop.window));
  out << YAML::EndMap;
  out << YAML::Key << "adc" << YAML::Value;
  if (s.adc) {
    out << YAML::BeginMap;
    out << YAML::Key << "bits" << YAML::Value << s.adc->bits;
    out << YAML::Key << "step" << YAML::Value << format_double(s.adc->step);
    out << YAML::Key << "formula" << YAML::Value
        << (s.adc->formula == BussgangFormula::Standard ? "standard" : "literal");
    out << YAML::EndMap;
  } else {
    out << YAML::Null;
  }
  out << YAML::Key << "refactor_period" << YAML::Value << s.refactor_period;
}

}  // namespace

std::string serialize_spec(const ExperimentSpec& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  emit_body(out, s, s.policies, s.scenario);
  out << YAML::Key << "num_seeds" << YAML::Value << s.num_seeds;
  out << YAML::Key << "output_dir" << YAML::Value << s.output_dir;
  out << YAML::Key << "reference" << YAML::Value << s.reference;
  out << YAML::Key << "emit" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "traces" << YAML::Value << s.emit.traces;
  out << YAML::Key << "summaries" << YAML::Value << s.emit.summaries;
  out << YAML::Key << "aggregate_csv" << YAML::Value << s.emit.aggregate_csv;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string cell_digest(const ExperimentSpec& spec, const PolicyConfig& policy, std::uint64_t seed) {
  SystemConfig sc = spec.scenario;
  sc.master_seed = seed;
  YAML::Emitter out;
  out << YAML::BeginMap;
  emit_body(out, spec, {policy}, sc);
  out << YAML::EndMap;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(out.c_str())));
  return buf;
}

}  // namespace gfcd::experiment
