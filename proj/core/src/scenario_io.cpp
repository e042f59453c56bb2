#include "gfcd/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "gfcd/errors.hpp"
#include "json.hpp"

namespace gfcd {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "gfcd-scenario";
constexpr int kVersion = 1;

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(m(i, j).real());
      data.push_back(m(i, j).imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"layout", "row-major-interleaved"}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
  if (j.at("layout").get<std::string>() != "row-major-interleaved")
    throw ConfigError("scenario: unsupported matrix layout");
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != 2 * rows * cols) throw ConfigError("scenario: matrix data size mismatch");
  CMatrix m(rows, cols);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c, p += 2) m(i, c) = cplx(data[p].get<double>(), data[p + 1].get<double>());
  return m;
}

json config_to_json(const SystemConfig& c) {
  return {{"num_devices", c.num_devices},
          {"bits_per_message", c.bits_per_message},
          {"seq_len", c.seq_len},
          {"num_antennas", c.num_antennas},
          {"num_active", c.num_active},
          {"tx_power_dbm", c.tx_power_dbm},
          {"noise_power_dbm", c.noise_power_dbm},
          {"pathloss_const_db", c.pathloss_const_db},
          {"pathloss_slope", c.pathloss_slope},
          {"cell_radius_km", c.cell_radius_km},
          {"min_distance_km", c.min_distance_km},
          {"placement", c.placement == Placement::CellEdge ? "cell_edge" : "uniform_disk"},
          {"normalize_power", c.normalize_power},
          {"master_seed", c.master_seed}};
}

SystemConfig config_from_json(const json& j) {
  SystemConfig c;
  c.num_devices = j.at("num_devices").get<int>();
  c.bits_per_message = j.at("bits_per_message").get<int>();
  c.seq_len = j.at("seq_len").get<int>();
  c.num_antennas = j.at("num_antennas").get<int>();
  c.num_active = j.at("num_active").get<int>();
  c.tx_power_dbm = j.at("tx_power_dbm").get<double>();
  c.noise_power_dbm = j.at("noise_power_dbm").get<double>();
  c.pathloss_const_db = j.at("pathloss_const_db").get<double>();
  c.pathloss_slope = j.at("pathloss_slope").get<double>();
  c.cell_radius_km = j.at("cell_radius_km").get<double>();
  c.min_distance_km = j.at("min_distance_km").get<double>();
  c.placement = j.at("placement").get<std::string>() == "uniform_disk" ? Placement::UniformDisk : Placement::CellEdge;
  c.normalize_power = j.at("normalize_power").get<bool>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
  json gamma = json::array();
  for (Eigen::Index i = 0; i < sc.truth.gamma_true.size(); ++i) gamma.push_back(sc.truth.gamma_true[i]);
  json pathloss = json::array();
  for (Eigen::Index i = 0; i < sc.truth.pathloss.size(); ++i) pathloss.push_back(sc.truth.pathloss[i]);
  json doc = {{"format", kFormat},
              {"version", kVersion},
              {"config", config_to_json(sc.config)},
              {"noise_var", sc.noise_var},
              {"sequences", matrix_to_json(sc.sequences)},
              {"received", matrix_to_json(sc.received)},
              {"truth",
               {{"messages_per_device", sc.truth.messages_per_device},
                {"active_devices", sc.truth.active_devices},
                {"message_index", sc.truth.message_index},
                {"gamma_true", std::move(gamma)},
                {"pathloss", std::move(pathloss)}}}};
  return doc.dump(1);
}

namespace {
Scenario scenario_from_document(const json& doc);
}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormat)
    throw ConfigError("scenario: not a gfcd-scenario document");
  try {
    return scenario_from_document(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

namespace {

Scenario scenario_from_document(const json& doc) {
  if (doc.at("version").get<int>() != kVersion) throw ConfigError("scenario: unsupported version");
  Scenario sc;
  sc.config = config_from_json(doc.at("config"));
  sc.noise_var = doc.at("noise_var").get<double>();
  sc.sequences = matrix_from_json(doc.at("sequences"));
  sc.received = matrix_from_json(doc.at("received"));
  const auto& t = doc.at("truth");
  sc.truth.messages_per_device = t.at("messages_per_device").get<int>();
  sc.truth.active_devices = t.at("active_devices").get<std::vector<int>>();
  sc.truth.message_index = t.at("message_index").get<std::vector<int>>();
  const auto g = t.at("gamma_true").get<std::vector<double>>();
  sc.truth.gamma_true = Eigen::Map<const RVector>(g.data(), static_cast<Eigen::Index>(g.size()));
  const auto pl = t.at("pathloss").get<std::vector<double>>();
  sc.truth.pathloss = Eigen::Map<const RVector>(pl.data(), static_cast<Eigen::Index>(pl.size()));
  const auto nr = sc.truth.pathloss.size() * sc.truth.messages_per_device;
  if (sc.sequences.cols() != nr || sc.truth.gamma_true.size() != nr || sc.received.rows() != sc.sequences.rows() ||
      sc.truth.message_index.size() != sc.truth.active_devices.size())
    throw ConfigError("scenario: inconsistent dimensions");
  return sc;
}

}  // namespace

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << scenario_to_json(scenario);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return scenario_from_json(ss.str());
}

}  // namespace gfcd
