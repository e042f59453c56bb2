#include "gfcd/beta.hpp"

#include <cmath>
#include <limits>

#include "gfcd/errors.hpp"

namespace gfcd {

namespace {

// Marsaglia-Tsang for shape >= 1. Returns log of the variate.
double log_gamma_mt(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
  }
}

}  // namespace

double sample_log_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("sample_gamma: shape must be positive and finite");
  if (shape >= 1.0) return log_gamma_mt(shape, rng);
  const double lg = log_gamma_mt(shape + 1.0, rng);
  return lg + std::log(rng.uniform_open()) / shape;
}

double sample_gamma(double shape, RngStream& rng) { return std::exp(sample_log_gamma(shape, rng)); }

double sample_beta(double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("sample_beta: parameters must be positive");
  const double la = sample_log_gamma(alpha, rng);
  const double lb = sample_log_gamma(beta, rng);
  // G_a / (G_a + G_b) = 1 / (1 + exp(lb - la))
  const double x = 1.0 / (1.0 + std::exp(lb - la));
  constexpr double tiny = std::numeric_limits<double>::min();
  constexpr double below_one = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (x <= 0.0) return tiny;
  if (x >= 1.0) return below_one;
  return x;
}

}  // namespace gfcd
