#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isaacslab/game_model.hpp"
#include "isaacslab/types.hpp"

namespace isaacs {

// Per-control differential fields used to build a transport near the
// diagonal: a d-vector field entering r, a k x d matrix field entering p,
// and a skew-symmetric d1 x d1 field Theta(x, xi), linear in xi.
using VectorField = std::function<Vec(int a, int b, const Vec& x)>;
using MatrixField = std::function<Mat(int a, int b, const Vec& x)>;
using ThetaField = std::function<Mat(int a, int b, const Vec& x, const Vec& xi)>;

// The (r, p, P, pi) parameter fields governing the coupled representation:
// x-coefficients are evaluated at the shifted parameter p(x,y), scaled by
// r(x,y), and rotated by the orthogonal P(x,y); pi is the exponential-weight
// direction field.
struct TransportStructure {
  PairScalarEvaluator r;   // scalar in [delta1, 1/delta1], r(x,x) = 1
  PairVectorEvaluator p;   // k-vector, p(x,x) = 0
  PairMatrixEvaluator P;   // d1 x d1 orthogonal, P(x,x) = I
  PairVectorEvaluator pi;  // d1-vector bounded by k0

  // Fast path: r == 1, p == 0, P == I identically.  Keeps the hatted
  // coefficients bit-identical to the base ones on the diagonal.
  bool identity = false;

  // Optional differential fields (r_diff, p_diff, theta); present together.
  bool has_differential = false;
  VectorField r_diff;
  MatrixField p_diff;
  ThetaField theta;

  // Checks r(x,x)=1, p(x,x)=0, P(x,x)=I, orthogonality of P, and
  // skew-symmetry/linearity of theta on the given sample points.
  // Throws ConfigError on violation (tolerance 1e-12 for orthogonality).
  void validate(const GameModel& model, const std::vector<Vec>& xs,
                const std::vector<Vec>& ys) const;
};

struct HatCoefficients {
  Mat sigma_hat;  // d x d1: r(x,y) sigma(p(x,y), x) P(x,y)
  Mat a_hat;      // d x d:  r^2 a(p(x,y), x) = (1/2) sigma_hat sigma_hat*
  Vec b_hat;      // d:      r^2 drift(p(x,y), x)
  double c_hat = 0.0;
  double f_hat = 0.0;
};

HatCoefficients hat_coefficients(const GameModel& model, const TransportStructure& transport,
                                 int a, int b, const Vec& x, const Vec& y);

// r == 1, p == 0, P == I; pi is the zero field.
TransportStructure identity_transport(int noise_dim, int param_dim);

// Identity transport whose pi field is mu sigma*(x) (x - y), the canonical
// coupling weight direction.
TransportStructure identity_transport_with_pi(const GameModel& model, double mu);

// Transport built from differential fields:
//   r(x,y) = 1 + <r_diff(y), x-y>,  p(x,y) = p_diff(y) (x-y),
//   P(x,y) = exp(theta(y, x-y)).
TransportStructure differential_transport(const GameModel& model, VectorField r_diff,
                                          MatrixField p_diff, ThetaField theta);

// Transport for a rotation-valued sigma independent of the controls and p
// (d1 == d): r == 1, P(x,y) = sigma*(x) sigma(y).  Makes the hatted sigma
// coincide with sigma(y).
TransportStructure rotation_transport(const GameModel& model);

// Matrix exponential of a small skew-symmetric matrix (scaling-and-squaring
// with a Taylor core); the result is orthogonal up to round-off.
Mat skew_exp(const Mat& theta);

}  // namespace isaacs
