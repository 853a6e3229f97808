#pragma once

#include <utility>
#include <vector>

#include "isaacslab/game_model.hpp"
#include "isaacslab/mesh.hpp"

namespace isaacs {

struct SolveOptions {
  // Convergence threshold on the normalized discrete residual: at each
  // interior node the Isaacs residual is divided by the local operator scale
  // (2 tr a / h^2 + |b|_1 / h + c + 1) before taking the max norm, which keeps
  // the criterion meaningful across mesh resolutions.
  double tol = 1e-10;
  // Cap on outer policy-improvement passes; 0 picks the finite-convergence
  // bound |A| |B| n automatically.
  long max_iter = 0;
};

struct SolveResult {
  GridFunction solution;
  int iterations = 0;        // linear policy solves performed
  double residual = 0.0;     // normalized residual max-norm at convergence
  double residual_abs = 0.0;
  // arg-optimal (alpha, beta) control pair per interior node, flat order
  std::vector<std::pair<int, int>> policy;
};

// Monotone finite-difference solution of
//   sup_a inf_b [ a : D2 v + drift . D v - c v + f ] = 0  in D,  v = g on dD,
// by Howard iteration: the inner minimization is resolved exactly for each
// outer policy, the outer policy is improved from the discrete Hamiltonian.
// Diffusion uses central differences, drift is fully upwinded (per node, per
// control pair), so the 1D scheme is unconditionally monotone; in 2D the
// cross term uses the 7-point stencil and requires diagonal dominance of a
// at every node (refused otherwise, naming the offending node).
// Whole-space domains are cut at the truncation radius with the zeroth-order
// balance sup_a inf_b [f - c v] = 0 as artificial boundary data (requires
// c > 0 there).
SolveResult solve_isaacs(const GameModel& model, const Mesh& mesh, const SolveOptions& opts = {});

// Direct sparse solve for a model with exactly one control pair; no policy
// iteration.  Cross-validation oracle for solve_isaacs.
SolveResult solve_linear(const GameModel& model, const Mesh& mesh, const SolveOptions& opts = {});

// Whole-space solve with truncation control: solves on the initial radius,
// doubles the radius (keeping h comparable) until values on the region of
// interest move by less than roi_tol, then returns the stabilized solve.
SolveResult solve_with_truncation_check(const GameModel& model, double radius0, int n0,
                                        double roi_lo, double roi_hi, double roi_tol = 1e-8,
                                        const SolveOptions& opts = {}, int max_doublings = 2);

// Artificial boundary value at x: the root of the decreasing function
// v -> sup_a inf_b [f(x) - c(x) v].
double zeroth_order_balance(const GameModel& model, const Vec& x);

}  // namespace isaacs
