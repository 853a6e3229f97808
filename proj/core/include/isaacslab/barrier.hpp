#pragma once

#include "isaacslab/game_model.hpp"
#include "isaacslab/mesh.hpp"
#include "isaacslab/types.hpp"

namespace isaacs {

class BarrierNotFound : public NumericalError {
 public:
  BarrierNotFound(const std::string& what, double achieved_margin)
      : NumericalError(what), achieved_margin(achieved_margin) {}
  double achieved_margin;
};

// Radial barrier cosh(mu R) - cosh(mu |x|) + 2 on the ball of radius R, with
// a C2 polynomial blend to a constant over [R, R + blend_len] so the function
// is defined on all of R^d with bounded derivatives and stays >= 1.
// The profile and its first two derivatives are evaluated analytically.
struct BarrierSpec {
  double mu = 1.0;
  double r_ball = 1.0;
  double blend_len = 1.0;
  double tail_value = 2.0;
  double verified_margin = 0.0;  // max over the verification run of (L + c) psi
  // Blend polynomial q(s) = 2 + c1 s + c2 s^2 + c3 s^3 + c4 s^4 on s in [0,1].
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;

  double psi(const Vec& x) const;
  Vec grad(const Vec& x) const;
  Mat hess(const Vec& x) const;

  // Radial profile and derivatives, rho = |x|.
  double profile(double rho) const;
  double profile_d1(double rho) const;
  double profile_d2(double rho) const;

  static BarrierSpec make(double mu, double r_ball);
};

// Smallest mu in the doubling sequence 1, 2, 4, ... <= mu_max for which
//   max over the verification mesh and all control pairs of
//   a : D2(psi) + drift . D(psi)   <=  -1
// (the discount term cancels in (L + c) psi).  Throws BarrierNotFound with
// the best achieved margin when no mu <= mu_max works.
BarrierSpec build_barrier(const GameModel& model, const Domain& domain, double mu_max,
                          int verification_nodes = 201);

// Equation-preserving change of unknown v -> v / psi:
//   sigma -> psi^(1/2) sigma,  drift -> psi drift + 2 a D(psi),
//   c -> -(a : D2(psi) + drift . D(psi) - c psi),  f -> f,  g -> g / psi.
// The transformed discount is >= 1 on the domain.  Refuses (NumericalError)
// unless the barrier's verified margin is <= -1.
GameModel check_transform(const GameModel& model, const BarrierSpec& barrier);

}  // namespace isaacs
