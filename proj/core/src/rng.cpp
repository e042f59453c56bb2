#include "gfcd/rng.hpp"

#include <cmath>

namespace gfcd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream RngStream::derive(std::uint64_t master_seed, std::string_view name) {
  return RngStream(splitmix64(master_seed ^ splitmix64(fnv1a64(name))));
}

RngStream RngStream::derive(std::uint64_t master_seed, std::string_view name,
                            std::uint64_t index) {
  return RngStream(splitmix64(splitmix64(master_seed ^ splitmix64(fnv1a64(name))) + index));
}

double RngStream::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
  for (;;) {
    const double u = uniform();
    if (u > 0.0) return u;
  }
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = engine_type::max() - engine_type::max() % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

double RngStream::normal() { return normal_(engine_); }

cplx RngStream::complex_normal(double variance) {
  const double s = std::sqrt(variance * 0.5);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

}  // namespace gfcd
