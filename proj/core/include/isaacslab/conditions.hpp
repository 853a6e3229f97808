#pragma once

#include <limits>
#include <string>
#include <vector>

#include "isaacslab/game_model.hpp"
#include "isaacslab/transport.hpp"

namespace isaacs {

// Squared matrix norm transverse to a unit direction:
//   |sigma|^2 - |xi* sigma|^2  ==  |(I - xi xi*) sigma|^2.
// Both forms are evaluated and cross-checked to 1e-10 relative error; the
// result is clamped to be nonnegative.  Throws InputError when |xi| is not 1
// within 1e-10.
double transverse_norm_sq(const Mat& sigma, const Vec& xi);

struct ConditionParams {
  double delta = 1.0;   // decay rate, >= 2 * delta1
  double delta1 = 0.5;  // discount floor
  double mu = 1.0;      // coupling strength; 0 is permitted and flagged
  double eps0 = 0.1;    // pair separation ceiling
};

struct WorstPoint {
  int alpha = -1;
  int beta = -1;
  Vec x;
  Vec y_or_xi;
};

struct ConditionReport {
  bool satisfied = false;
  double worst_margin = -std::numeric_limits<double>::infinity();  // max of LHS - RHS
  WorstPoint worst_point;
  ConditionParams params;
  int n = -1;  // slack index when applicable
  double tolerance = 1e-10;
  std::string mesh_note;
  std::vector<std::string> notes;
};

// Sample of points (and external parameters) for pointwise checks.
struct SampleGrid {
  std::vector<Vec> xs;
  std::vector<Vec> ps;  // defaults to {0} when empty

  static SampleGrid uniform_1d(double lo, double hi, int count);
  static SampleGrid uniform_2d(double lo, double hi, int count_per_axis);
};

// Close pairs (y + t xi, y) with t log-spaced in [t_min, eps0].
struct PairSample {
  std::vector<Vec> ys;
  std::vector<Vec> directions;  // unit vectors
  int n_t = 12;
  double t_min = 1e-4;

  static PairSample default_1d(double lo, double hi, int count);
  static PairSample default_2d(double lo, double hi, int count_per_axis, int n_dirs = 64);
};

// min eigenvalue of a = (1/2) sigma sigma* over the sample vs the declared
// ellipticity floor; worst_margin = delta0 - min sampled eigenvalue.
ConditionReport check_ellipticity(const GameModel& model, const SampleGrid& sample);

// Pointwise coupling inequality on close pairs: with xi = (x-y)/|x-y|,
//   |sigma_hat(x,y) - sigma(y)|^2_xi + 2 <x-y, b_hat(x,y) - b(y)>
//     <= 2 (c(y) - delta) |x-y|^2 + 4 mu <x-y, a(x)(x-y)>.
ConditionReport check_coupling_condition(const GameModel& model,
                                         const TransportStructure& transport,
                                         const ConditionParams& params,
                                         const PairSample& sample);

// Left-hand side of the differential form of the coupling inequality at one
// point and unit direction; directional derivatives of sigma and drift are
// central differences with step fd_step in both x and p.
double differential_condition_lhs(const GameModel& model, const TransportStructure& transport,
                                  int a, int b, const Vec& x, const Vec& xi,
                                  double fd_step = 1e-5);

// Differential coupling condition over unit directions and points:
//   LHS(x, xi) <= 2 (c(x) - delta1 - delta) + 4 mu <xi, a(x) xi>.
// Requires the transport's differential fields.
ConditionReport check_coupling_condition_differential(const GameModel& model,
                                                      const TransportStructure& transport,
                                                      const ConditionParams& params,
                                                      const std::vector<Vec>& xi_sample,
                                                      const std::vector<Vec>& x_sample,
                                                      double fd_step = 1e-5);

struct CouplingIndexResult {
  enum class Status { found, necessary_violated, inconclusive };
  Status status = Status::inconclusive;
  int n = -1;                           // minimal feasible slack index when found
  double witness_x = std::numeric_limits<double>::quiet_NaN();
  bool necessary_holds = true;          // b' < c wherever a0 = b = 0 on the mesh
  std::string note;
};

// One-dimensional slack search: smallest n in 1..n_max with
//   b'(x) <= c(x) - 1/n + n (a0(x) + b(x)^2)  on a dense mesh of [lo, hi].
// Reports a genuine violation of the necessary condition b' < c at sampled
// points with a0 = b = 0 distinctly from an inconclusive exhaustion.
CouplingIndexResult find_coupling_n(const std::function<double(double)>& a0,
                                    const std::function<double(double)>& b,
                                    const std::function<double(double)>& b_prime,
                                    const std::function<double(double)>& c,
                                    double lo = -2.0, double hi = 2.0,
                                    int n_max = 1 << 16, int mesh_n = 801);

// Doubles mu from max(1, heuristic) until the pointwise coupling condition
// holds; returns the tuned parameters' report.  Throws NumericalError when
// mu_cap is exceeded.
ConditionReport tune_mu(const GameModel& model, const TransportStructure& transport,
                        ConditionParams params, const PairSample& sample,
                        double mu_cap = 1 << 20);

}  // namespace isaacs
