#include "isaacslab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace isaacs {

double transverse_norm_sq(const Mat& sigma, const Vec& xi) {
  if (std::abs(xi.norm() - 1.0) > 1e-10)
    throw InputError("transverse_norm_sq: xi is not a unit vector");
  const double full = sigma.squaredNorm();
  const double along = (xi.transpose() * sigma).squaredNorm();
  const double direct = full - along;
  const int d = static_cast<int>(sigma.rows());
  const Mat proj = Mat::Identity(d, d) - xi * xi.transpose();
  const double projected = (proj * sigma).squaredNorm();
  if (std::abs(direct - projected) > 1e-10 * (1.0 + full))
    throw NumericalError("transverse_norm_sq: the two formulas disagree");
  return std::max(direct, 0.0);
}

SampleGrid SampleGrid::uniform_1d(double lo, double hi, int count) {
  SampleGrid g;
  g.xs.reserve(count);
  for (int i = 0; i < count; ++i) g.xs.push_back(vec1(lo + (hi - lo) * i / (count - 1)));
  return g;
}

SampleGrid SampleGrid::uniform_2d(double lo, double hi, int count_per_axis) {
  SampleGrid g;
  for (int i = 0; i < count_per_axis; ++i)
    for (int j = 0; j < count_per_axis; ++j)
      g.xs.push_back(vec2(lo + (hi - lo) * i / (count_per_axis - 1),
                          lo + (hi - lo) * j / (count_per_axis - 1)));
  return g;
}

PairSample PairSample::default_1d(double lo, double hi, int count) {
  PairSample s;
  for (int i = 0; i < count; ++i) s.ys.push_back(vec1(lo + (hi - lo) * i / (count - 1)));
  s.directions = {vec1(1.0), vec1(-1.0)};
  return s;
}

PairSample PairSample::default_2d(double lo, double hi, int count_per_axis, int n_dirs) {
  PairSample s;
  for (int i = 0; i < count_per_axis; ++i)
    for (int j = 0; j < count_per_axis; ++j)
      s.ys.push_back(vec2(lo + (hi - lo) * i / (count_per_axis - 1),
                          lo + (hi - lo) * j / (count_per_axis - 1)));
  for (int k = 0; k < n_dirs; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n_dirs;
    s.directions.push_back(vec2(std::cos(angle), std::sin(angle)));
  }
  return s;
}

namespace {

std::vector<double> log_spaced(double t_min, double t_max, int count) {
  std::vector<double> ts(count);
  for (int i = 0; i < count; ++i)
    ts[i] = t_min * std::pow(t_max / t_min, count == 1 ? 0.0 : double(i) / (count - 1));
  return ts;
}

double min_eigenvalue(const Mat& a) {
  if (a.rows() == 1) return a(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(a)};
  return es.eigenvalues().minCoeff();
}

}  // namespace

ConditionReport check_ellipticity(const GameModel& model, const SampleGrid& sample) {
  model.controls.validate();
  ConditionReport report;
  report.params.delta1 = model.delta1;
  std::vector<Vec> ps = sample.ps;
  if (ps.empty()) ps.push_back(model.zero_param());

  double min_eig = std::numeric_limits<double>::infinity();
  for (int ia = 0; ia < model.controls.n_a(); ++ia)
    for (int ib = 0; ib < model.controls.n_b(); ++ib)
      for (const Vec& p : ps)
        for (const Vec& x : sample.xs) {
          const double lam = min_eigenvalue(model.a_matrix(ia, ib, p, x));
          if (lam < min_eig) {
            min_eig = lam;
            report.worst_point = {ia, ib, x, p};
          }
        }
  report.worst_margin = model.delta0 - min_eig;
  report.satisfied = report.worst_margin <= report.tolerance;
  std::ostringstream os;
  os << sample.xs.size() << " spatial points, " << ps.size() << " parameter points";
  report.mesh_note = os.str();
  return report;
}

ConditionReport check_coupling_condition(const GameModel& model,
                                         const TransportStructure& transport,
                                         const ConditionParams& params,
                                         const PairSample& sample) {
  model.controls.validate();
  if (!(params.eps0 > 0.0)) throw InputError("coupling condition: eps0 must be positive");
  if (params.delta < 2.0 * params.delta1 - 1e-12)
    throw InputError("coupling condition: needs delta >= 2 delta1");
  if (params.mu < 0.0) throw InputError("coupling condition: mu must be nonnegative");

  ConditionReport report;
  report.params = params;
  if (params.mu < 1.0) report.notes.push_back("mu < 1: outside the stated range, permitted for diagnostics");

  const auto ts = log_spaced(sample.t_min, params.eps0, sample.n_t);
  bool skipped_diagonal = false;
  for (int ia = 0; ia < model.controls.n_a(); ++ia) {
    for (int ib = 0; ib < model.controls.n_b(); ++ib) {
      for (const Vec& y : sample.ys) {
        const Mat sigma_y = model.sigma_at(ia, ib, y);
        const Vec b_y = model.drift_at(ia, ib, y);
        const double c_y = model.c_at(ia, ib, y);
        for (const Vec& xi : sample.directions) {
          for (double t : ts) {
            if (t <= 0.0) {
              skipped_diagonal = true;
              continue;
            }
            const Vec x = y + t * xi;
            const Vec diff = x - y;
            const HatCoefficients hat = hat_coefficients(model, transport, ia, ib, x, y);
            const double lhs = transverse_norm_sq(Mat(hat.sigma_hat - sigma_y), xi) +
                               2.0 * diff.dot(hat.b_hat - b_y);
            const Mat a_x = model.a_matrix_at(ia, ib, x);
            const double rhs = 2.0 * (c_y - params.delta) * diff.squaredNorm() +
                               4.0 * params.mu * diff.dot(a_x * diff);
            const double margin = lhs - rhs;
            if (margin > report.worst_margin) {
              report.worst_margin = margin;
              report.worst_point = {ia, ib, x, y};
            }
          }
        }
      }
    }
  }
  if (skipped_diagonal) report.notes.push_back("pairs with x = y skipped");
  report.satisfied = report.worst_margin <= report.tolerance;
  std::ostringstream os;
  os << sample.ys.size() << " base points, " << sample.directions.size() << " directions, "
     << sample.n_t << " separations in [" << sample.t_min << ", " << params.eps0 << "]";
  report.mesh_note = os.str();
  return report;
}

namespace {

// Directional derivative along xi of a (p, x)-dependent evaluator at p = 0,
// including the chain through the parameter shift field p_diff(x) xi.
template <typename Eval, typename Value>
Value directional_derivative(const Eval& eval, int a, int b, const GameModel& model,
                             const Mat& p_shift, const Vec& x, const Vec& xi, double h) {
  const Vec p0 = model.zero_param();
  Value out = eval(a, b, p0, x);
  out.setZero();
  for (int i = 0; i < model.dim; ++i) {
    if (xi(i) == 0.0) continue;
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    out += (xi(i) / (2.0 * h)) * (eval(a, b, p0, xp) - eval(a, b, p0, xm));
  }
  const Vec pxi = p_shift * xi;
  for (int j = 0; j < model.param_dim; ++j) {
    if (pxi(j) == 0.0) continue;
    Vec pp = p0, pm = p0;
    pp(j) += h;
    pm(j) -= h;
    out += (pxi(j) / (2.0 * h)) * (eval(a, b, pp, x) - eval(a, b, pm, x));
  }
  return out;
}

}  // namespace

double differential_condition_lhs(const GameModel& model, const TransportStructure& transport,
                                  int a, int b, const Vec& x, const Vec& xi, double fd_step) {
  if (!transport.has_differential)
    throw ConfigError("differential coupling condition: transport has no differential fields");
  const Vec p0 = model.zero_param();
  const Mat p_shift = transport.p_diff(a, b, x);
  const Vec r_vec = transport.r_diff(a, b, x);
  const Mat sigma0 = model.sigma(a, b, p0, x);
  const Vec b0 = model.drift(a, b, p0, x);

  const Mat dsigma = directional_derivative<MatrixEvaluator, Mat>(model.sigma, a, b, model,
                                                                  p_shift, x, xi, fd_step);
  const Vec db = directional_derivative<VectorEvaluator, Vec>(model.drift, a, b, model,
                                                              p_shift, x, xi, fd_step);
  const double r_xi = r_vec.dot(xi);
  const Mat theta = transport.theta(a, b, x, xi);
  const Mat sigma_term = dsigma + r_xi * sigma0 + Mat(sigma0 * theta);
  return transverse_norm_sq(sigma_term, xi) + 2.0 * xi.dot(db + 2.0 * r_xi * b0);
}

ConditionReport check_coupling_condition_differential(const GameModel& model,
                                                      const TransportStructure& transport,
                                                      const ConditionParams& params,
                                                      const std::vector<Vec>& xi_sample,
                                                      const std::vector<Vec>& x_sample,
                                                      double fd_step) {
  model.controls.validate();
  if (!transport.has_differential)
    throw ConfigError("differential coupling condition: transport has no differential fields");
  ConditionReport report;
  report.params = params;
  if (params.mu < 1.0) report.notes.push_back("mu < 1: outside the stated range, permitted for diagnostics");

  for (int ia = 0; ia < model.controls.n_a(); ++ia) {
    for (int ib = 0; ib < model.controls.n_b(); ++ib) {
      for (const Vec& x : x_sample) {
        const double c_x = model.c_at(ia, ib, x);
        const Mat a_x = model.a_matrix_at(ia, ib, x);
        for (const Vec& xi : xi_sample) {
          const double lhs = differential_condition_lhs(model, transport, ia, ib, x, xi, fd_step);
          const double rhs = 2.0 * (c_x - params.delta1 - params.delta) +
                             4.0 * params.mu * xi.dot(a_x * xi);
          const double margin = lhs - rhs;
          if (margin > report.worst_margin) {
            report.worst_margin = margin;
            report.worst_point = {ia, ib, x, xi};
          }
        }
      }
    }
  }
  report.satisfied = report.worst_margin <= report.tolerance;
  std::ostringstream os;
  os << x_sample.size() << " points, " << xi_sample.size() << " directions, fd step " << fd_step;
  report.mesh_note = os.str();
  return report;
}

CouplingIndexResult find_coupling_n(const std::function<double(double)>& a0,
                                    const std::function<double(double)>& b,
                                    const std::function<double(double)>& b_prime,
                                    const std::function<double(double)>& c,
                                    double lo, double hi, int n_max, int mesh_n) {
  CouplingIndexResult result;
  constexpr double kZeroTol = 1e-12;
  std::vector<double> xs(mesh_n);
  for (int i = 0; i < mesh_n; ++i) xs[i] = lo + (hi - lo) * i / (mesh_n - 1);

  for (double x : xs) {
    if (std::abs(a0(x)) <= kZeroTol && std::abs(b(x)) <= kZeroTol && !(b_prime(x) < c(x))) {
      result.necessary_holds = false;
      result.witness_x = x;
    }
  }
  if (!result.necessary_holds) {
    result.status = CouplingIndexResult::Status::necessary_violated;
    result.note = "b' >= c at a sampled point with a0 = b = 0";
    return result;
  }

  for (int n = 1; n <= n_max; ++n) {
    bool ok = true;
    double witness = 0.0;
    for (double x : xs) {
      const double slack = c(x) - 1.0 / n + n * (a0(x) + b(x) * b(x)) - b_prime(x);
      if (slack < -1e-12) {
        ok = false;
        witness = x;
        break;
      }
    }
    if (ok) {
      result.status = CouplingIndexResult::Status::found;
      result.n = n;
      return result;
    }
    result.witness_x = witness;
  }
  result.status = CouplingIndexResult::Status::inconclusive;
  result.note = "n_max exhausted while the necessary condition holds; "
                "mesh may be too coarse or n_max too small";
  return result;
}

ConditionReport tune_mu(const GameModel& model, const TransportStructure& transport,
                        ConditionParams params, const PairSample& sample, double mu_cap) {
  double sup_c = 0.0;
  for (const Vec& y : sample.ys)
    for (int ia = 0; ia < model.controls.n_a(); ++ia)
      for (int ib = 0; ib < model.controls.n_b(); ++ib)
        sup_c = std::max(sup_c, model.c_at(ia, ib, y));
  double mu = 1.0;
  if (model.delta0 > 0.0) {
    const double heuristic =
        (model.k1 * model.k1 + 2.0 * model.k1 * params.delta + sup_c) / (2.0 * model.delta0);
    mu = std::max(1.0, heuristic);
  }
  for (; mu <= mu_cap; mu *= 2.0) {
    params.mu = mu;
    ConditionReport report = check_coupling_condition(model, transport, params, sample);
    if (report.satisfied) return report;
  }
  throw NumericalError("tune_mu: coupling condition unsatisfied up to the mu cap");
}

}  // namespace isaacs
