#include "gfcd/adc.hpp"

#include <cmath>
#include <string>

#include "gfcd/errors.hpp"

namespace gfcd {

double QuantizerConfig::rho() const { return std::ldexp(1.0, -2 * bits); }

void QuantizerConfig::validate() const {
  if (bits < 1 || bits > 24) throw ConfigError("adc: bits must be in [1, 24]");
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("adc: step must be positive");
}

QuantizerConfig QuantizerConfig::uniform(const std::vector<int>& per_antenna_bits, double step,
                                         BussgangFormula formula) {
  if (per_antenna_bits.empty()) throw ConfigError("adc: no bit resolution given");
  for (int b : per_antenna_bits)
    if (b != per_antenna_bits.front())
      throw ConfigError("adc: non-uniform per-antenna resolutions are not supported (got " +
                        std::to_string(per_antenna_bits.front()) + " and " + std::to_string(b) + ")");
  QuantizerConfig cfg{per_antenna_bits.front(), step, formula};
  cfg.validate();
  return cfg;
}

double quantize_real(double x, const QuantizerConfig& cfg) {
  if (std::isnan(x)) return x;
  const double s = cfg.step;
  const int half = 1 << (cfg.bits - 1);
  // Smallest z in [1, 2^b - 1] with x <= r_z; past the top threshold the
  // value lands in bin 2^b, whose level is r_{2^b - 1} + s/2.
  double zf = std::ceil(x / s) + half;
  if (zf < 1.0) zf = 1.0;
  if (zf > 2.0 * half) zf = 2.0 * half;
  auto z = static_cast<int>(zf);
  // ceil(x / s) can round across a threshold; fix up against the exact r_z.
  auto threshold = [&](int zz) { return (zz - half) * s; };
  while (z > 1 && x <= threshold(z - 1)) --z;
  while (z < 2 * half && x > threshold(z)) ++z;
  return threshold(z) - 0.5 * s;
}

CMatrix quantize_complex_matrix(const CMatrix& y, const QuantizerConfig& cfg) {
  CMatrix out(y.rows(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j)
    for (Eigen::Index i = 0; i < y.rows(); ++i)
      out(i, j) = cplx(quantize_real(y(i, j).real(), cfg), quantize_real(y(i, j).imag(), cfg));
  return out;
}

double bussgang_gain(const QuantizerConfig& cfg) {
  const double rho = cfg.rho();
  return cfg.formula == BussgangFormula::Standard ? 1.0 - rho : rho;
}

CMatrix bussgang_covariance(const CMatrix& sigma, const QuantizerConfig& cfg) {
  const double rho = cfg.rho();
  const double g = bussgang_gain(cfg);
  CMatrix out = (g * g) * sigma;
  out.diagonal() += (rho * (1.0 - rho)) * sigma.diagonal().real().cast<cplx>();
  return hermitian_part(out);
}

QuantizedModel quantized_objective_model(double noise_var, const CMatrix& sigma_hat_q, const QuantizerConfig& cfg) {
  const double rho = cfg.rho();
  const double g = bussgang_gain(cfg);
  QuantizedModel m;
  m.column_scale = g;
  m.effective_noise = g * g * noise_var + rho * (1.0 - rho) * sigma_hat_q.diagonal().real().mean();
  return m;
}

Problem quantized_problem(const CMatrix& sequences, const CMatrix& sigma_hat_q, double noise_var,
                          const QuantizerConfig& cfg) {
  const QuantizedModel m = quantized_objective_model(noise_var, sigma_hat_q, cfg);
  Problem p;
  p.sequences = sequences * m.column_scale;
  p.sigma_hat = sigma_hat_q;
  p.noise_var = m.effective_noise;
  return p;
}

double quantized_objective_exact(const CMatrix& sequences, const RVector& gamma, double noise_var,
                                 const CMatrix& sigma_hat_q, const QuantizerConfig& cfg) {
  const Eigen::Index l = sequences.rows();
  CMatrix sigma = CMatrix::Identity(l, l) * noise_var;
  for (Eigen::Index k = 0; k < gamma.size(); ++k)
    if (gamma[k] != 0.0) sigma.noalias() += gamma[k] * sequences.col(k) * sequences.col(k).adjoint();
  const CMatrix sq = bussgang_covariance(sigma, cfg);
  Eigen::LLT<CMatrix> llt(sq);
  if (llt.info() != Eigen::Success) throw NumericalError("quantized_objective_exact: Sigma_q is not positive definite");
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l; ++i) logdet += std::log(llt.matrixLLT()(i, i).real());
  return 2.0 * logdet + llt.solve(sigma_hat_q).trace().real();
}

}  // namespace gfcd
