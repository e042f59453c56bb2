#pragma once

#include <cstdint>
#include <vector>

#include "gfcd/linalg.hpp"
#include "gfcd/rng.hpp"

namespace gfcd {

enum class Placement { CellEdge, UniformDisk };

/// Scenario and physical-layer parameters. Defaults follow the large-cell
/// simulation setting (N = 1500, K = 50, L = 200, M = 16, J = 1).
struct SystemConfig {
  int num_devices = 1500;       // N
  int bits_per_message = 1;     // J, R = 2^J
  int seq_len = 200;            // L
  int num_antennas = 16;        // M
  int num_active = 50;          // K
  double tx_power_dbm = 40.0;
  double noise_power_dbm = -99.0;
  double pathloss_const_db = -128.1;
  double pathloss_slope = 37.6;
  double cell_radius_km = 1.0;
  /// Closest admissible distance under UniformDisk placement.
  double min_distance_km = 0.05;
  Placement placement = Placement::CellEdge;
  bool normalize_power = true;
  std::uint64_t master_seed = 1;

  int messages_per_device() const { return 1 << bits_per_message; }
  int num_coords() const { return num_devices * messages_per_device(); }

  /// Throws ConfigError when any invariant fails.
  void validate() const;
  bool operator==(const SystemConfig&) const = default;
};

struct GroundTruth {
  std::vector<int> active_devices;    // sorted, size K
  std::vector<int> message_index;     // per active device, in [0, R)
  RVector gamma_true;                 // length N*R
  RVector pathloss;                   // g_i^2 per device (normalized if enabled)
  int messages_per_device = 2;

  /// Coordinate of (device, message): device * R + message.
  int coord(int device, int message) const { return device * messages_per_device + message; }
};

struct Scenario {
  SystemConfig config;
  CMatrix sequences;   // Q, L x NR; column k = device * R + message
  GroundTruth truth;
  CMatrix received;    // Y, L x M
  double noise_var = 0.0;
};

/// Linear large-scale fading power g^2 for a device at `distance_km`.
double pathloss_linear(double distance_km, const SystemConfig& config);

/// Noise power normalized by the transmit power (and by the reference
/// pathloss when normalize_power is set).
double effective_noise_var(const SystemConfig& config);

/// Draws Q, the active set, messages, channels and noise from named
/// substreams of config.master_seed.
Scenario generate_scenario(const SystemConfig& config);
/// Same draw with an explicit noise variance (0 gives a noiseless Y).
Scenario generate_scenario(const SystemConfig& config, double noise_var);

/// (1/M) Y Y^H, made exactly Hermitian.
CMatrix sample_covariance(const CMatrix& received);

}  // namespace gfcd
