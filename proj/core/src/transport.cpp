#include "isaacslab/transport.hpp"

#include <cmath>

namespace isaacs {

void TransportStructure::validate(const GameModel& model, const std::vector<Vec>& xs,
                                  const std::vector<Vec>& ys) const {
  const int d1 = model.noise_dim;
  const Mat eye = Mat::Identity(d1, d1);
  for (int ia = 0; ia < model.controls.n_a(); ++ia) {
    for (int ib = 0; ib < model.controls.n_b(); ++ib) {
      for (const Vec& x : xs) {
        if (std::abs(r(ia, ib, x, x) - 1.0) > 1e-12)
          throw ConfigError("transport: r(x,x) != 1");
        if (p(ia, ib, x, x).cwiseAbs().maxCoeff() > 1e-12)
          throw ConfigError("transport: p(x,x) != 0");
        if ((P(ia, ib, x, x) - eye).cwiseAbs().maxCoeff() > 1e-12)
          throw ConfigError("transport: P(x,x) != I");
        for (const Vec& y : ys) {
          const Mat Pxy = P(ia, ib, x, y);
          if ((Mat(Pxy.transpose() * Pxy) - eye).cwiseAbs().maxCoeff() > 1e-12)
            throw ConfigError("transport: P(x,y) not orthogonal to 1e-12");
          if (has_differential) {
            const Vec dir = y;  // ys double as directions for the theta checks
            const Mat th = theta(ia, ib, x, dir);
            if ((th + Mat(th.transpose())).cwiseAbs().maxCoeff() > 1e-12)
              throw ConfigError("transport: theta(x,y) not antisymmetric");
            const Mat th2 = theta(ia, ib, x, Vec(2.0 * dir));
            if ((th2 - 2.0 * th).cwiseAbs().maxCoeff() > 1e-10)
              throw ConfigError("transport: theta(x,y) not linear in y");
          }
        }
      }
    }
  }
}

HatCoefficients hat_coefficients(const GameModel& model, const TransportStructure& transport,
                                 int a, int b, const Vec& x, const Vec& y) {
  HatCoefficients out;
  if (transport.identity) {
    const Vec p0 = model.zero_param();
    out.sigma_hat = model.sigma(a, b, p0, x);
    out.a_hat = 0.5 * (out.sigma_hat * out.sigma_hat.transpose());
    out.b_hat = model.drift(a, b, p0, x);
    out.c_hat = model.c(a, b, p0, x);
    out.f_hat = model.f(a, b, p0, x);
    return out;
  }
  const double rv = transport.r(a, b, x, y);
  const Vec pv = transport.p(a, b, x, y);
  const Mat Pv = transport.P(a, b, x, y);
  const double r2 = rv * rv;
  const Mat s = model.sigma(a, b, pv, x);
  out.sigma_hat = rv * (s * Pv);
  out.a_hat = r2 * 0.5 * (s * s.transpose());
  out.b_hat = r2 * model.drift(a, b, pv, x);
  out.c_hat = r2 * model.c(a, b, pv, x);
  out.f_hat = r2 * model.f(a, b, pv, x);
  return out;
}

Mat skew_exp(const Mat& theta) {
  const int n = static_cast<int>(theta.rows());
  double norm = theta.cwiseAbs().maxCoeff() * n;
  int squarings = 0;
  Mat t = theta;
  while (norm > 0.5) {
    t *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  // Taylor to order 12 is ample once the scaled norm is below 1/2.
  Mat result = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= 12; ++k) {
    term = Mat(term * t) / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = Mat(result * result);
  return result;
}

TransportStructure identity_transport(int noise_dim, int param_dim) {
  TransportStructure t;
  t.identity = true;
  t.r = [](int, int, const Vec&, const Vec&) { return 1.0; };
  t.p = [param_dim](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(param_dim)); };
  t.P = [noise_dim](int, int, const Vec&, const Vec&) { return Mat(Mat::Identity(noise_dim, noise_dim)); };
  t.pi = [noise_dim](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(noise_dim)); };
  return t;
}

TransportStructure identity_transport_with_pi(const GameModel& model, double mu) {
  TransportStructure t = identity_transport(model.noise_dim, model.param_dim);
  t.pi = [&model, mu](int a, int b, const Vec& x, const Vec& y) {
    const Mat s = model.sigma_at(a, b, x);
    return Vec(mu * (s.transpose() * (x - y)));
  };
  return t;
}

TransportStructure differential_transport(const GameModel& model, VectorField r_diff,
                                          MatrixField p_diff, ThetaField theta) {
  TransportStructure t;
  t.identity = false;
  t.has_differential = true;
  t.r_diff = r_diff;
  t.p_diff = p_diff;
  t.theta = theta;
  t.r = [r_diff](int a, int b, const Vec& x, const Vec& y) {
    return 1.0 + r_diff(a, b, y).dot(x - y);
  };
  t.p = [p_diff](int a, int b, const Vec& x, const Vec& y) {
    return Vec(p_diff(a, b, y) * (x - y));
  };
  t.P = [theta](int a, int b, const Vec& x, const Vec& y) {
    return skew_exp(theta(a, b, y, Vec(x - y)));
  };
  const int d1 = model.noise_dim;
  t.pi = [d1](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(d1)); };
  return t;
}

TransportStructure rotation_transport(const GameModel& model) {
  TransportStructure t = identity_transport(model.noise_dim, model.param_dim);
  t.identity = false;
  t.P = [&model](int a, int b, const Vec& x, const Vec& y) {
    return Mat(model.sigma_at(a, b, x).transpose() * model.sigma_at(a, b, y));
  };
  return t;
}

}  // namespace isaacs
