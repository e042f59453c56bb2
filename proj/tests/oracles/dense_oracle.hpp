#pragma once

// Brute-force reference computations that share no code with the library:
// explicit loops, LU determinants and a bracketed 1-D search.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// (1/M) Y Y^H by triple loop.
inline CMat sample_cov_loops(const CMat& y) {
  const auto l = y.rows(), m = y.cols();
  CMat s = CMat::Zero(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j) {
      cplx acc = 0.0;
      for (Eigen::Index t = 0; t < m; ++t) acc += y(i, t) * std::conj(y(j, t));
      s(i, j) = acc / static_cast<double>(m);
    }
  return s;
}

// Q diag(gamma) Q^H + noise I by explicit outer products.
inline CMat model_cov(const CMat& q, const RVec& gamma, double noise) {
  const auto l = q.rows();
  CMat s = CMat::Identity(l, l) * noise;
  for (Eigen::Index k = 0; k < q.cols(); ++k)
    for (Eigen::Index i = 0; i < l; ++i)
      for (Eigen::Index j = 0; j < l; ++j) s(i, j) += gamma[k] * q(i, k) * std::conj(q(j, k));
  return s;
}

// log det S + tr(S^{-1} Shat) via partial-pivot LU.
inline double objective(const CMat& sigma, const CMat& sigma_hat) {
  const Eigen::PartialPivLU<CMat> lu(sigma);
  const CMat u = lu.matrixLU();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) logdet += std::log(std::abs(u(i, i)));
  const CMat x = lu.solve(sigma_hat);
  return logdet + x.trace().real();
}

inline double objective(const CMat& q, const RVec& gamma, double noise, const CMat& sigma_hat) {
  return objective(model_cov(q, gamma, noise), sigma_hat);
}

// Golden-section minimum of f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - invphi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + invphi * (b - a), fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// c = a^H S^{-1} a and g = a^H S^{-1} Shat S^{-1} a from an LU solve.
inline std::pair<double, double> quad_forms(const CMat& sigma, const CMat& sigma_hat, const Eigen::VectorXcd& a) {
  const Eigen::VectorXcd u = sigma.partialPivLu().solve(a);
  const double c = a.dot(u).real();
  const double g = u.dot(sigma_hat * u).real();
  return {c, g};
}

// One-dimensional objective along coordinate k, up to the constant F(gamma):
// F_k(d) = log(1 + d c) - d g / (1 + d c).
inline double coord_profile(double c, double g, double d) {
  return std::log1p(d * c) - d * g / (1.0 + d * c);
}

// Oracle step: golden-section over [-gamma_k, d* + 10 (1 + |d*|)] of the
// profile, with c and g computed densely. The lower end is nudged inside the
// domain when -gamma_k <= -1/c.
inline double oracle_delta(const CMat& q, const RVec& gamma, double noise, const CMat& sigma_hat, Eigen::Index k) {
  const CMat sigma = model_cov(q, gamma, noise);
  const auto [c, g] = quad_forms(sigma, sigma_hat, q.col(k));
  const double dstar = (g - c) / (c * c);
  const double lo = -gamma[k];
  const double hi = std::max(lo, dstar) + 10.0 * (1.0 + std::abs(dstar));
  auto f = [&](double d) { return coord_profile(c, g, d); };
  const double dmin = golden_min(f, lo, hi);
  // The boundary itself is a candidate for the clamped case.
  return f(lo) <= f(dmin) ? lo : dmin;
}

}  // namespace oracle
