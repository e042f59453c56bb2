#pragma once

#include <random>

#include "gfcd/covariance.hpp"
#include "gfcd/linalg.hpp"

namespace fixtures {

// Random complex Gaussian matrix from a plain std engine.
inline gfcd::CMatrix randn(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& eng, double var = 1.0) {
  std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
  gfcd::CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gfcd::cplx(n(eng), n(eng));
  return m;
}

// Random instance: Q ~ CN(0, 1/L), Y drawn from a sparse gamma plus noise.
inline gfcd::Problem random_problem(Eigen::Index l, Eigen::Index nr, std::uint64_t seed, double noise = 0.0813,
                                    Eigen::Index m = 16) {
  std::mt19937_64 eng(seed);
  gfcd::Problem p;
  p.sequences = randn(l, nr, eng, 1.0 / static_cast<double>(l));
  gfcd::CMatrix y = randn(l, m, eng, noise);
  std::uniform_int_distribution<Eigen::Index> pick(0, nr - 1);
  for (int i = 0; i < std::max<Eigen::Index>(1, nr / 10); ++i) {
    const auto k = pick(eng);
    y += p.sequences.col(k) * randn(1, m, eng);
  }
  p.sigma_hat = gfcd::hermitian_part(y * y.adjoint() / static_cast<double>(m));
  p.noise_var = noise;
  return p;
}

// Random nonnegative gamma with roughly a third of the entries positive.
inline gfcd::RVector random_gamma(Eigen::Index nr, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  gfcd::RVector g(nr);
  for (Eigen::Index k = 0; k < nr; ++k) g[k] = u(eng) < 0.33 ? 2.0 * u(eng) : 0.0;
  return g;
}

}  // namespace fixtures
