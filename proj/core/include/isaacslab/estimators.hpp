#pragma once

#include <map>
#include <string>

#include "isaacslab/conditions.hpp"
#include "isaacslab/coupled_sde.hpp"
#include "isaacslab/solver.hpp"

namespace isaacs {

struct EstimateReport {
  double estimate = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();  // NaN when the constant is unspecified
  bool within_bound = false;  // at 3 standard errors, when a bound is given
  std::map<std::string, double> diagnostics;
};

struct JIReports {
  EstimateReport j;  // time-integral estimator, bound 2/delta
  EstimateReport i;  // running-sup estimator, bound unspecified
};

// Monte Carlo means of
//   J = int_0^{kappa(lambda)} |xi_t| e^{-phi_t + delta t / 2} dt   and
//   I = sup_{t < kappa(lambda)} |xi_t| e^{-phi_t + delta t / 2},
// with kappa the first grid time |x_eps - x_0| >= lambda.  The pointwise
// coupling condition is verified first for (delta, delta1, mu, eps0) around
// the starting point; a failed check refuses with the report's worst margin.
JIReports estimate_j_i(const GameModel& model, const TransportStructure& transport,
                       const MCConfig& cfg, bool skip_condition_check = false);

// E[ e^{-phi_kappa + kappa delta / 2} ; kappa < horizon ].  Exactly 1 when
// lambda <= epsilon (the coupling stops at time zero).  The diagnostics carry
// estimate * lambda / epsilon for scaling studies.
EstimateReport estimate_exit_decay(const GameModel& model, const TransportStructure& transport,
                                   const MCConfig& cfg, bool skip_condition_check = false);

// E sup_{t < gamma(M) ^ kappa(lambda)} |rho_t - 1| e^{-phi_t + delta1 t / 2}
// with lambda = lambda1 / mu; lambda1 is calibrated by searching
// {0.5, 0.25, 0.1, 0.05} * eps0 for the largest value keeping the proof's
// drift inequality nonpositive on a sampled mesh.  Needs c >= delta1.
EstimateReport estimate_rho_sup(const GameModel& model, const TransportStructure& transport,
                                const MCConfig& cfg, bool skip_condition_check = false);

// E e^{-phi} at gamma(M) ^ kappa(lambda) with the calibrated lambda; the
// scaling target is linear in epsilon with an unspecified prefactor.
EstimateReport estimate_coupling_discount(const GameModel& model,
                                          const TransportStructure& transport,
                                          const MCConfig& cfg, bool skip_condition_check = false);

// E |xi_gamma|^2 e^{-2 phi_gamma + delta gamma} at gamma = kappa ^ stop_time;
// bounded by 1 when delta >= k1^2.
EstimateReport estimate_xi_second_moment(const GameModel& model,
                                         const TransportStructure& transport, const MCConfig& cfg,
                                         double stop_time);

// Single-control verification of the reweighted representation: the Monte
// Carlo mean of
//   int_0^gamma z_t f_hat(x_t, y_t) e^{-phi_hat_t} dt
//     + z_gamma v(x_gamma) e^{-phi_hat_gamma}
// against the target z0 * v(start), with gamma the earliest of: x leaving the
// oracle's box, z leaving (1/M, M), the coupling radius, the rho corridor,
// and stop_time.  v comes from the finite-difference oracle.  within_bound
// means |estimate - target| <= 3 std_error + identity_tol.
EstimateReport verify_representation(const GameModel& model, const TransportStructure& transport,
                                     const MCConfig& cfg, const SolveResult& pde_oracle,
                                     double stop_time, double identity_tol = 1e-6);

// Largest lambda1 in {0.5, 0.25, 0.1, 0.05} * eps0 such that
//   2 C + delta1/2 + |pi|^2 - (2 c - delta1) <= 0
// on sampled pairs with |x - y| <= lambda1 / mu, where C = c(y) - c_hat(x,y).
// Throws NumericalError when no candidate passes.
double calibrate_lambda1(const GameModel& model, const TransportStructure& transport,
                         const MCConfig& cfg);

// Deterministic pairwise mean / standard error over per-path values.
struct MeanStats {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanStats pairwise_stats(const std::vector<double>& values);

}  // namespace isaacs
