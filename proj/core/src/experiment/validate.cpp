#include "gfcd/experiment/validate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gfcd/adc.hpp"
#include "gfcd/covariance.hpp"
#include "gfcd/experiment/runner.hpp"
#include "gfcd/scenario_io.hpp"

namespace gfcd::experiment {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult check_structure(const Scenario& sc) {
  const auto& t = sc.truth;
  const int r = t.messages_per_device;
  const Eigen::Index n = t.pathloss.size();
  std::string why;
  if (sc.sequences.cols() != n * r) why = "sequence count differs from N R";
  if (!std::is_sorted(t.active_devices.begin(), t.active_devices.end()) ||
      std::set<int>(t.active_devices.begin(), t.active_devices.end()).size() != t.active_devices.size())
    why = "active set not sorted and unique";
  for (Eigen::Index d = 0; d < n && why.empty(); ++d) {
    int nonzero = 0;
    for (int m = 0; m < r; ++m) nonzero += t.gamma_true[d * r + m] != 0.0;
    if (nonzero > 1) why = "device " + std::to_string(d) + " has more than one active message";
  }
  if (why.empty() && !sc.sequences.allFinite()) why = "non-finite sequence entry";
  if (why.empty() && !sc.received.allFinite()) why = "non-finite received sample";
  return {"scenario structure", why.empty(), why.empty() ? "N R = " + std::to_string(n * r) : why};
}

CheckResult check_covariance(const CMatrix& s) {
  const double herm = (s - s.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const bool ok = herm == 0.0 && lo >= -1e-10 * scale;
  return {"sample covariance Hermitian PSD", ok, "asymmetry " + num(herm) + ", min eigenvalue " + num(lo)};
}

void check_descent(const Problem& p, int updates, std::uint64_t seed, std::vector<CheckResult>& out) {
  SolverState st = init_state(p);
  RngStream rng = RngStream::derive(seed, "validate");
  double worst_identity = 0.0, worst_dense = 0.0, worst_inverse = 0.0;
  bool feasible = true;
  for (int i = 0; i < updates; ++i) {
    // Dense evaluations cost O(L^2 NR); sample one update in ten.
    const bool dense = i % 10 == 0;
    const double before = dense ? dense_objective(p, st.gamma) : 0.0;
    const auto k = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(p.num_coords())));
    const UpdateStep step = coordinate_step(st, p, k);
    apply_update(st, p, step);
    worst_inverse = std::max(worst_inverse, inverse_residual(st));
    feasible = feasible && st.gamma.minCoeff() >= 0.0;
    if (!dense) continue;
    const double after = dense_objective(p, st.gamma);
    worst_identity = std::max(worst_identity, std::abs(after - (before - step.reward)) / std::max(1.0, std::abs(before)));
    worst_dense = std::max(worst_dense, std::abs(st.objective_F - after) / std::max(1.0, std::abs(after)));
  }
  out.push_back({"reward identity", worst_identity <= 1e-9, "max relative gap " + num(worst_identity)});
  out.push_back({"objective vs dense evaluation", worst_dense <= 1e-8, "max relative gap " + num(worst_dense)});
  out.push_back({"inverse maintenance", worst_inverse <= 1e-6, "max |S S^-1 - I| " + num(worst_inverse)});
  out.push_back({"nonnegative iterates", feasible, feasible ? "gamma >= 0" : "negative coordinate"});
}

CheckResult check_quantizer(const QuantizerConfig& q, const CMatrix& y) {
  const CMatrix yq = quantize_complex_matrix(y, q);
  std::set<double> levels;
  bool idempotent = true;
  for (Eigen::Index j = 0; j < yq.cols(); ++j)
    for (Eigen::Index i = 0; i < yq.rows(); ++i)
      for (double v : {yq(i, j).real(), yq(i, j).imag()}) {
        levels.insert(v);
        idempotent = idempotent && quantize_real(v, q) == v;
      }
  std::set<double> all;
  for (int z = -2 * q.levels(); z <= 2 * q.levels(); ++z) all.insert(quantize_real(z * q.step * 0.5, q));
  const bool ok = idempotent && static_cast<int>(all.size()) == q.levels() &&
                  static_cast<int>(levels.size()) <= q.levels();
  return {"quantizer levels", ok,
          std::to_string(all.size()) + " levels (expected " + std::to_string(q.levels()) + "), " +
              std::to_string(levels.size()) + " used"};
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport validate_spec(const ExperimentSpec& spec, const ValidateOptions& options) {
  ValidationReport rep;
  const std::uint64_t seed = spec.seed_of(0);
  const SeedProblem sp = build_seed_problem(spec, seed);
  if (!options.dump_scenario.empty()) save_scenario(sp.scenario, options.dump_scenario);
  rep.checks.push_back(check_structure(sp.scenario));
  rep.checks.push_back(check_covariance(sp.problem.sigma_hat));
  check_descent(sp.problem, options.updates, seed, rep.checks);
  if (spec.adc) rep.checks.push_back(check_quantizer(*spec.adc, sp.scenario.received));
  return rep;
}

}  // namespace gfcd::experiment
