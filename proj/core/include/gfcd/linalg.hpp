#pragma once

#include <Eigen/Dense>
#include <complex>

namespace gfcd {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Copy the lower triangle onto the upper one (conjugated) and zero the
/// imaginary part of the diagonal.
inline void hermitize_from_lower(CMatrix& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = cplx(m(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) m(j, i) = std::conj(m(i, j));
  }
}

/// (A + A^H) / 2
inline CMatrix hermitian_part(const CMatrix& a) {
  return (a + a.adjoint()) * 0.5;
}

}  // namespace gfcd
