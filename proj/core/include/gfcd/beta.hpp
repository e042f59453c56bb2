#pragma once

#include "gfcd/rng.hpp"

namespace gfcd {

/// Gamma(shape, 1) variate for any real shape > 0.
///
/// Marsaglia & Tsang squeeze/rejection for shape >= 1; for shape < 1 the
/// variate is G(shape + 1) * U^(1/shape), computed in log space so tiny
/// shapes do not underflow to an exact zero before the Beta ratio.
double sample_gamma(double shape, RngStream& rng);

/// Log of a Gamma(shape, 1) variate. Same draw sequence as sample_gamma.
double sample_log_gamma(double shape, RngStream& rng);

/// Beta(alpha, beta) as G_a / (G_a + G_b), strictly inside (0, 1).
double sample_beta(double alpha, double beta, RngStream& rng);

}  // namespace gfcd
