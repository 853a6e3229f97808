#pragma once

#include <string>
#include <vector>

#include "isaacslab/solver.hpp"
#include "isaacslab/sweeps.hpp"

namespace isaacs {

// Auxiliary maximizer controls with their own coefficients.  They must not
// depend on the minimizer's control and must honor the same regularity
// constants as the base model.
struct A2Extension {
  std::vector<std::string> labels;
  MatrixEvaluator sigma;
  VectorEvaluator drift;
  ScalarEvaluator c;
  ScalarEvaluator f;
};

// Merged game over the enlarged maximizer grid: the auxiliary controls keep
// their coefficients but their running payoff is lowered by the penalty K.
// Beta-independence of the extension is verified by sampling; overlapping
// labels are a configuration error.
GameModel build_penalized_model(const GameModel& base, const A2Extension& extension, double K);

struct PenalizeSweepEntry {
  double k = 0.0;
  double sup_gap = 0.0;       // sup-node (v_K - v)
  double min_gap = 0.0;       // min-node (v_K - v); >= -tol when v <= v_K holds
  long a2_active_nodes = 0;   // nodes whose optimal policy uses an auxiliary control
  int iterations = 0;
};

struct PenalizeSweepResult {
  std::vector<PenalizeSweepEntry> entries;
  double fitted_slope = 0.0;   // log-log slope of sup_gap against K (K >= 4)
  double slope_stderr = 0.0;
  double truncation_shift = 0.0;  // gap movement when the radius is doubled at the largest K
};

// Solves the penalized game for each K on the same mesh as the reference
// solve and tabulates the gap to the unpenalized value function.
PenalizeSweepResult sweep_k(const GameModel& base, const A2Extension& extension,
                            const std::vector<double>& k_list, const Mesh& mesh,
                            const SolveResult& v_reference, const SolveOptions& opts = {},
                            bool check_truncation = false);

}  // namespace isaacs
