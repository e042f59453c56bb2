#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "gfcd/linalg.hpp"

namespace gfcd {

/// Random stream used throughout the library. Every consumer owns one;
/// streams are derived from a master seed and a substream name so that
/// swapping one consumer (e.g. the selection policy) leaves every other
/// draw unchanged.
class RngStream {
 public:
  using engine_type = std::mt19937_64;
  using result_type = engine_type::result_type;

  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Substream `name` of `master_seed`.
  static RngStream derive(std::uint64_t master_seed, std::string_view name);
  /// Substream `name`/`index` of `master_seed` (used for per-trial seeds).
  static RngStream derive(std::uint64_t master_seed, std::string_view name,
                          std::uint64_t index);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1): never returns 0.
  double uniform_open();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cplx complex_normal(double variance);
  bool bernoulli(double p);

  engine_type& engine() { return engine_; }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return engine_type::min(); }
  static constexpr result_type max() { return engine_type::max(); }
  result_type operator()() { return engine_(); }

 private:
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// FNV-1a over a byte string. Stable across platforms; used for substream
/// names and config digests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace gfcd
