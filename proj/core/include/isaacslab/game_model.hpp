#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isaacslab/types.hpp"

namespace isaacs {

// Finite control grids for the two players.  The optional auxiliary list
// holds the extra maximizer controls used by the penalized game; it is kept
// disjoint from the primary list.
struct ControlGrid {
  std::vector<std::string> a_controls;
  std::vector<std::string> b_controls;
  std::vector<std::string> a2_controls;

  int n_a() const { return static_cast<int>(a_controls.size()); }
  int n_b() const { return static_cast<int>(b_controls.size()); }

  // Throws ConfigError on empty lists, duplicate labels, or overlap between
  // the primary and auxiliary maximizer lists.
  void validate() const;
};

// Coefficient data of a time-homogeneous zero-sum diffusion game:
// dx = sigma(a,b,p,x) dw + drift(a,b,p,x) dt, discount rate c >= 0, running
// payoff f, terminal payoff g, with declared regularity constants.
struct GameModel {
  int dim = 1;        // spatial dimension d (1 or 2)
  int noise_dim = 1;  // d1 >= d
  int param_dim = 1;  // dimension k of the external parameter p

  ControlGrid controls;

  MatrixEvaluator sigma;   // d x d1
  VectorEvaluator drift;   // d
  ScalarEvaluator c;       // discount rate, >= 0
  ScalarEvaluator f;       // running payoff rate
  TerminalEvaluator g;     // terminal payoff

  double k0 = 1.0;      // uniform coefficient bound
  double k1 = 1.0;      // Lipschitz constant
  double delta0 = 1.0;  // ellipticity floor for a = (1/2) sigma sigma*
  double delta1 = 0.0;  // lower bound on c (0 if none)

  Vec zero_param() const { return Vec::Zero(param_dim); }

  // Coefficients at p = 0; these are the values the equation and the base
  // diffusion use.
  Mat sigma_at(int a, int b, const Vec& x) const { return sigma(a, b, zero_param(), x); }
  Vec drift_at(int a, int b, const Vec& x) const { return drift(a, b, zero_param(), x); }
  double c_at(int a, int b, const Vec& x) const { return c(a, b, zero_param(), x); }
  double f_at(int a, int b, const Vec& x) const { return f(a, b, zero_param(), x); }

  // a = (1/2) sigma sigma*.
  Mat a_matrix(int a, int b, const Vec& p, const Vec& x) const;
  Mat a_matrix_at(int a, int b, const Vec& x) const { return a_matrix(a, b, zero_param(), x); }
};

struct HamiltonianResult {
  double value = 0.0;
  int alpha = -1;  // arg-max control index
  int beta = -1;   // arg-min control index
};

// sup over a-controls of inf over b-controls of
//   a(p,x) : d2u + drift(p,x) . du - c(p,x) u + f(p,x).
// Ties resolve to the first control in list order.  d2u must be symmetric.
HamiltonianResult hamiltonian(const GameModel& model, const Vec& p, const Vec& x,
                              double u, const Vec& du, const Mat& d2u);

}  // namespace isaacs
