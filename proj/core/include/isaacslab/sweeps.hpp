#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "isaacslab/solver.hpp"

namespace isaacs {

struct SweepEntry {
  double param = 0.0;
  double value = 0.0;
  std::map<std::string, double> extra;
};

// Tabulated (parameter -> measured quantity) results with a least-squares
// power-law fit on log-log axes and its standard error.
struct SweepReport {
  std::vector<SweepEntry> entries;
  double fitted_exponent = 0.0;
  double exponent_stderr = 0.0;
  std::string verdict;
};

// Least-squares slope of log(y) against log(x); returns {slope, stderr}.
std::pair<double, double> fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

// Lipschitz estimates of the solved value function over a family of models
// indexed by the ellipticity floor delta0; the fitted exponent measures how
// the estimate grows as delta0 decreases.
SweepReport sweep_delta0(const std::function<GameModel(double)>& family,
                         const std::vector<double>& delta0_list, const Mesh& mesh,
                         double region_lo, double region_hi, const SolveOptions& opts = {});

// Interior Lipschitz estimates under mesh refinement for a model whose
// terminal payoff is merely continuous.  The region must stay at distance
// >= 0.1 from the boundary.  Verdict "bounded" when the last two estimates
// agree within 10%.
SweepReport interior_lipschitz_probe(const GameModel& model, const Domain& domain,
                                     const std::vector<int>& n_list, double region_lo,
                                     double region_hi, const SolveOptions& opts = {});

}  // namespace isaacs
