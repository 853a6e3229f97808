#include "isaacslab/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace isaacs {

namespace {

double sinhc(double t) {
  if (std::abs(t) < 1e-6) return 1.0 + t * t / 6.0;
  return std::sinh(t) / t;
}

}  // namespace

BarrierSpec BarrierSpec::make(double mu, double r_ball) {
  BarrierSpec b;
  b.mu = mu;
  b.r_ball = r_ball;
  const double slope = mu * std::sinh(mu * r_ball);
  const double curv = mu * mu * std::cosh(mu * r_ball);
  b.blend_len = std::min(1.0, 0.25 / (slope + curv));
  // C2 match at rho = r_ball, zero slope and curvature at the far end.
  b.c1 = -b.blend_len * slope;
  b.c2 = -0.5 * b.blend_len * b.blend_len * curv;
  b.c4 = 0.5 * (b.c1 + b.c2);
  b.c3 = -b.c1 - (4.0 / 3.0) * b.c2;
  b.tail_value = 2.0 + b.c1 + b.c2 + b.c3 + b.c4;
  return b;
}

double BarrierSpec::profile(double rho) const {
  if (rho <= r_ball) return std::cosh(mu * r_ball) - std::cosh(mu * rho) + 2.0;
  if (rho >= r_ball + blend_len) return tail_value;
  const double s = (rho - r_ball) / blend_len;
  return 2.0 + s * (c1 + s * (c2 + s * (c3 + s * c4)));
}

double BarrierSpec::profile_d1(double rho) const {
  if (rho <= r_ball) return -mu * std::sinh(mu * rho);
  if (rho >= r_ball + blend_len) return 0.0;
  const double s = (rho - r_ball) / blend_len;
  return (c1 + s * (2.0 * c2 + s * (3.0 * c3 + s * 4.0 * c4))) / blend_len;
}

double BarrierSpec::profile_d2(double rho) const {
  if (rho <= r_ball) return -mu * mu * std::cosh(mu * rho);
  if (rho >= r_ball + blend_len) return 0.0;
  const double s = (rho - r_ball) / blend_len;
  return (2.0 * c2 + s * (6.0 * c3 + s * 12.0 * c4)) / (blend_len * blend_len);
}

double BarrierSpec::psi(const Vec& x) const { return profile(x.norm()); }

Vec BarrierSpec::grad(const Vec& x) const {
  const double rho = x.norm();
  if (rho <= r_ball)  // -mu sinh(mu rho) x / rho, finite at the origin
    return Vec(-mu * mu * sinhc(mu * rho) * x);
  return Vec((profile_d1(rho) / rho) * x);
}

Mat BarrierSpec::hess(const Vec& x) const {
  const int d = static_cast<int>(x.size());
  const double rho = x.norm();
  if (rho < 1e-8) return Mat(-mu * mu * Mat::Identity(d, d));
  const double f1 = profile_d1(rho);
  const double f2 = profile_d2(rho);
  const Mat outer = (x * x.transpose()) / (rho * rho);
  return Mat((f2 - f1 / rho) * outer + (f1 / rho) * Mat::Identity(d, d));
}

namespace {

std::vector<Vec> verification_points(const Domain& domain, int dim, int nodes) {
  std::vector<Vec> pts;
  const double lo = domain.lo(), hi = domain.hi();
  const double step = (hi - lo) / (nodes - 1);
  if (dim == 1) {
    pts.reserve(nodes);
    for (int i = 0; i < nodes; ++i) pts.push_back(vec1(lo + i * step));
  } else {
    const int side = std::max(9, static_cast<int>(std::lround(std::sqrt(double(nodes)))));
    const double s2 = (hi - lo) / (side - 1);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) pts.push_back(vec2(lo + i * s2, lo + j * s2));
  }
  return pts;
}

double barrier_margin(const GameModel& model, const BarrierSpec& barrier,
                      const std::vector<Vec>& points) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& x : points) {
    const Vec dpsi = barrier.grad(x);
    const Mat d2psi = barrier.hess(x);
    for (int ia = 0; ia < model.controls.n_a(); ++ia) {
      for (int ib = 0; ib < model.controls.n_b(); ++ib) {
        const Mat a = model.a_matrix_at(ia, ib, x);
        const double val = (a.cwiseProduct(d2psi)).sum() + model.drift_at(ia, ib, x).dot(dpsi);
        worst = std::max(worst, val);
      }
    }
  }
  return worst;
}

}  // namespace

BarrierSpec build_barrier(const GameModel& model, const Domain& domain, double mu_max,
                          int verification_nodes) {
  domain.validate();
  if (!domain.bounded()) throw InputError("build_barrier: domain must be bounded");
  model.controls.validate();
  const double r_ball = std::max(std::abs(domain.lo()), std::abs(domain.hi()));
  const auto points = verification_points(domain, model.dim, verification_nodes);

  double best_margin = std::numeric_limits<double>::infinity();
  for (double mu = 1.0; mu <= mu_max * (1.0 + 1e-12); mu *= 2.0) {
    BarrierSpec barrier = BarrierSpec::make(mu, r_ball);
    const double margin = barrier_margin(model, barrier, points);
    best_margin = std::min(best_margin, margin);
    if (margin <= -1.0) {
      barrier.verified_margin = margin;
      return barrier;
    }
  }
  std::ostringstream os;
  os << "build_barrier: no mu <= " << mu_max << " achieves (L+c)psi <= -1"
     << " (best margin " << best_margin << ")";
  throw BarrierNotFound(os.str(), best_margin);
}

GameModel check_transform(const GameModel& model, const BarrierSpec& barrier) {
  if (!(barrier.verified_margin <= -1.0 + 1e-12))
    throw NumericalError("check_transform: barrier margin > -1, refusing to transform");

  GameModel out = model;
  const GameModel base = model;  // value copy keeps the evaluators alive
  const BarrierSpec bar = barrier;

  out.sigma = [base, bar](int a, int b, const Vec& p, const Vec& x) {
    return Mat(std::sqrt(bar.psi(x)) * base.sigma(a, b, p, x));
  };
  out.drift = [base, bar](int a, int b, const Vec& p, const Vec& x) {
    return Vec(bar.psi(x) * base.drift(a, b, p, x) +
               2.0 * (base.a_matrix(a, b, p, x) * bar.grad(x)));
  };
  out.c = [base, bar](int a, int b, const Vec& p, const Vec& x) {
    const Mat am = base.a_matrix(a, b, p, x);
    const double lpsi = (am.cwiseProduct(bar.hess(x))).sum() +
                        base.drift(a, b, p, x).dot(bar.grad(x)) -
                        base.c(a, b, p, x) * bar.psi(x);
    return -lpsi;
  };
  out.g = [base, bar](const Vec& x) { return base.g(x) / bar.psi(x); };

  out.delta1 = 1.0;  // -L psi >= 1 on the verified domain
  const double psi_max = std::cosh(bar.mu * bar.r_ball) + 2.0;
  out.k0 = model.k0 * psi_max * (1.0 + 2.0 * bar.mu * std::sinh(bar.mu * bar.r_ball));
  return out;
}

}  // namespace isaacs
