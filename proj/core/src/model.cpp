#include "gfcd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gfcd/errors.hpp"

namespace gfcd {

namespace {

double raw_pathloss(double distance_km, const SystemConfig& c) {
  return std::pow(10.0, (c.pathloss_const_db - c.pathloss_slope * std::log10(distance_km)) / 10.0);
}

double reference_pathloss(const SystemConfig& c) {
  return c.normalize_power ? raw_pathloss(c.cell_radius_km, c) : 1.0;
}

}  // namespace

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid scenario: " + what); };
  if (num_devices < 1) fail("num_devices must be >= 1");
  if (bits_per_message < 0 || bits_per_message > 20) fail("bits_per_message must be in [0, 20]");
  if (seq_len < 1) fail("seq_len must be >= 1");
  if (num_antennas < 1) fail("num_antennas must be >= 1");
  if (num_active < 0) fail("num_active must be >= 0");
  if (num_active > num_devices) fail("num_active exceeds num_devices");
  for (double v : {tx_power_dbm, noise_power_dbm, pathloss_const_db, pathloss_slope})
    if (!std::isfinite(v)) fail("powers and pathloss parameters must be finite");
  if (!(cell_radius_km > 0.0) || !std::isfinite(cell_radius_km)) fail("cell_radius_km must be > 0");
  if (placement == Placement::UniformDisk &&
      !(min_distance_km > 0.0 && min_distance_km < cell_radius_km))
    fail("min_distance_km must be in (0, cell_radius_km)");
}

double pathloss_linear(double distance_km, const SystemConfig& config) {
  if (!(distance_km > 0.0)) throw DomainError("pathloss_linear: distance must be positive");
  return raw_pathloss(distance_km, config) / reference_pathloss(config);
}

double effective_noise_var(const SystemConfig& config) {
  return std::pow(10.0, (config.noise_power_dbm - config.tx_power_dbm) / 10.0) /
         reference_pathloss(config);
}

Scenario generate_scenario(const SystemConfig& config) {
  return generate_scenario(config, effective_noise_var(config));
}

Scenario generate_scenario(const SystemConfig& config, double noise_var) {
  config.validate();
  if (noise_var < 0.0) throw DomainError("generate_scenario: negative noise variance");

  const int n = config.num_devices;
  const int r = config.messages_per_device();
  const int l = config.seq_len;
  const int m = config.num_antennas;
  const int k = config.num_active;

  Scenario sc;
  sc.config = config;
  sc.noise_var = noise_var;

  auto seq_rng = RngStream::derive(config.master_seed, "sequences");
  sc.sequences.resize(l, static_cast<Eigen::Index>(n) * r);
  const double seq_var = 1.0 / l;
  for (Eigen::Index col = 0; col < sc.sequences.cols(); ++col)
    for (Eigen::Index row = 0; row < l; ++row) sc.sequences(row, col) = seq_rng.complex_normal(seq_var);

  // Partial Fisher-Yates: the first K entries are a uniform K-subset.
  auto act_rng = RngStream::derive(config.master_seed, "activity");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(act_rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> active(perm.begin(), perm.begin() + k);
  std::sort(active.begin(), active.end());
  std::vector<int> messages(k);
  for (int i = 0; i < k; ++i) messages[i] = static_cast<int>(act_rng.uniform_index(r));

  auto place_rng = RngStream::derive(config.master_seed, "placement");
  GroundTruth& truth = sc.truth;
  truth.messages_per_device = r;
  truth.pathloss.resize(n);
  for (int i = 0; i < n; ++i) {
    double d = config.cell_radius_km;
    if (config.placement == Placement::UniformDisk) {
      const double rmin2 = config.min_distance_km * config.min_distance_km;
      const double rmax2 = config.cell_radius_km * config.cell_radius_km;
      d = std::sqrt(rmin2 + (rmax2 - rmin2) * place_rng.uniform());
    }
    truth.pathloss[i] = pathloss_linear(d, config);
  }
  truth.active_devices = active;
  truth.message_index = messages;
  truth.gamma_true = RVector::Zero(static_cast<Eigen::Index>(n) * r);
  for (int i = 0; i < k; ++i)
    truth.gamma_true[truth.coord(active[i], messages[i])] = truth.pathloss[active[i]];

  auto chan_rng = RngStream::derive(config.master_seed, "channels");
  sc.received = CMatrix::Zero(l, m);
  CVector h(m);
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < m; ++a) h[a] = chan_rng.complex_normal(1.0);
    const double amp = std::sqrt(truth.pathloss[active[i]]);
    sc.received.noalias() += (amp * sc.sequences.col(truth.coord(active[i], messages[i]))) * h.transpose();
  }

  auto noise_rng = RngStream::derive(config.master_seed, "noise");
  for (Eigen::Index col = 0; col < m; ++col)
    for (Eigen::Index row = 0; row < l; ++row)
      sc.received(row, col) += noise_rng.complex_normal(noise_var);
  return sc;
}

CMatrix sample_covariance(const CMatrix& received) {
  const double m = static_cast<double>(received.cols());
  CMatrix s = (received * received.adjoint()) / m;
  return hermitian_part(s);
}

}  // namespace gfcd
