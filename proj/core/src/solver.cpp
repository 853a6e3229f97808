#include "isaacslab/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isaacs {

namespace {

constexpr int kMaxNeighbors = 6;

struct NodeStencil {
  double center = 0.0;  // coefficient of v_node in (-L v); positive
  double payoff = 0.0;  // f at the node
  int count = 0;
  long nb[kMaxNeighbors];
  double w[kMaxNeighbors];  // nonnegative neighbor weights

  void add(long flat, double weight) {
    nb[count] = flat;
    w[count] = weight;
    ++count;
  }

  // -center v_i + sum w v_nb + f evaluated on grid values
  double apply(const Eigen::VectorXd& values, long self) const {
    double s = payoff - center * values(self);
    for (int k = 0; k < count; ++k) s += w[k] * values(nb[k]);
    return s;
  }
};

// Upwind stencils for every (interior node, control pair), evaluated once.
// Coefficient evaluators are required to be pure, which is spot-checked by
// re-evaluating a few entries after the sweep.
class Discretization {
 public:
  Discretization(const GameModel& model, const Mesh& mesh) : model_(model), mesh_(mesh) {
    const int n = mesh.n;
    na_ = model.controls.n_a();
    nb_ = model.controls.n_b();
    if (mesh.dim == 1) {
      interior_.reserve(n);
      for (int i = 1; i <= n; ++i) interior_.push_back(mesh.index(i));
    } else {
      interior_.reserve(static_cast<long>(n) * n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) interior_.push_back(mesh.index(i, j));
    }
    points_.reserve(interior_.size());
    for (long flat : interior_) points_.push_back(mesh.point(flat));

    stencils_.resize(interior_.size() * na_ * nb_);
    scales_.assign(interior_.size(), 1.0);
    for (long k = 0; k < size(); ++k) {
      for (int ia = 0; ia < na_; ++ia)
        for (int ib = 0; ib < nb_; ++ib) {
          NodeStencil st = evaluate_stencil(k, ia, ib);
          scales_[k] = std::max(scales_[k], st.center + 1.0);
          stencils_[(k * na_ + ia) * nb_ + ib] = st;
        }
    }
    spot_check_purity();
  }

  long size() const { return static_cast<long>(interior_.size()); }
  long flat(long k) const { return interior_[k]; }
  const Vec& point(long k) const { return points_[k]; }
  const Mesh& mesh() const { return mesh_; }
  const GameModel& model() const { return model_; }

  const NodeStencil& stencil(long k, int ia, int ib) const {
    return stencils_[(k * na_ + ia) * nb_ + ib];
  }
  double scale(long k) const { return scales_[k]; }

 private:
  NodeStencil evaluate_stencil(long k, int ia, int ib) const {
    const Vec& x = points_[k];
    const double h = mesh_.h;
    NodeStencil st;
    st.payoff = model_.f_at(ia, ib, x);
    const Mat a = model_.a_matrix_at(ia, ib, x);
    const Vec b = model_.drift_at(ia, ib, x);
    const double c = model_.c_at(ia, ib, x);
    if (mesh_.dim == 1) {
      const int i = static_cast<int>(interior_[k]);
      const double ax = a(0, 0);
      const double bp = std::max(b(0), 0.0), bm = std::max(-b(0), 0.0);
      st.add(mesh_.index(i + 1), ax / (h * h) + bp / h);
      st.add(mesh_.index(i - 1), ax / (h * h) + bm / h);
      st.center = 2.0 * ax / (h * h) + (bp + bm) / h + c;
      return st;
    }
    const int m = mesh_.points_per_axis();
    const int i = static_cast<int>(interior_[k] / m);
    const int j = static_cast<int>(interior_[k] % m);
    const double a11 = a(0, 0), a22 = a(1, 1), a12 = a(0, 1);
    const double ad = std::abs(a12);
    if (a11 < ad - 1e-14 || a22 < ad - 1e-14) {
      std::ostringstream os;
      os << "solve: monotonicity violated at node (" << x(0) << ", " << x(1)
         << "), control pair (" << ia << ", " << ib
         << "): cross-derivative a12 exceeds diagonal dominance";
      throw NumericalError(os.str());
    }
    const double b1p = std::max(b(0), 0.0), b1m = std::max(-b(0), 0.0);
    const double b2p = std::max(b(1), 0.0), b2m = std::max(-b(1), 0.0);
    st.add(mesh_.index(i + 1, j), (a11 - ad) / (h * h) + b1p / h);
    st.add(mesh_.index(i - 1, j), (a11 - ad) / (h * h) + b1m / h);
    st.add(mesh_.index(i, j + 1), (a22 - ad) / (h * h) + b2p / h);
    st.add(mesh_.index(i, j - 1), (a22 - ad) / (h * h) + b2m / h);
    if (ad > 0.0) {
      if (a12 > 0.0) {
        st.add(mesh_.index(i + 1, j + 1), ad / (h * h));
        st.add(mesh_.index(i - 1, j - 1), ad / (h * h));
      } else {
        st.add(mesh_.index(i + 1, j - 1), ad / (h * h));
        st.add(mesh_.index(i - 1, j + 1), ad / (h * h));
      }
    }
    st.center = 2.0 * (a11 + a22 - ad) / (h * h) + (b1p + b1m + b2p + b2m) / h + c;
    return st;
  }

  void spot_check_purity() const {
    const long step = std::max<long>(1, size() / 7);
    for (long k = 0; k < size(); k += step) {
      const NodeStencil fresh = evaluate_stencil(k, na_ - 1, nb_ - 1);
      const NodeStencil& cached = stencil(k, na_ - 1, nb_ - 1);
      if (fresh.center != cached.center || fresh.payoff != cached.payoff)
        throw NumericalError("solve: coefficient evaluators are not pure");
    }
  }

  const GameModel& model_;
  const Mesh& mesh_;
  int na_ = 1, nb_ = 1;
  std::vector<long> interior_;
  std::vector<Vec> points_;
  std::vector<NodeStencil> stencils_;
  std::vector<double> scales_;
};

Eigen::VectorXd thomas_solve(std::vector<double>& lower, std::vector<double>& diag,
                             std::vector<double>& upper, Eigen::VectorXd rhs) {
  const long m = static_cast<long>(diag.size());
  for (long i = 1; i < m; ++i) {
    if (diag[i - 1] == 0.0) throw NumericalError("solve: singular discrete operator");
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs(i) -= w * rhs(i - 1);
  }
  if (diag[m - 1] == 0.0) throw NumericalError("solve: singular discrete operator");
  Eigen::VectorXd v(m);
  v(m - 1) = rhs(m - 1) / diag[m - 1];
  for (long i = m - 2; i >= 0; --i) v(i) = (rhs(i) - upper[i] * v(i + 1)) / diag[i];
  return v;
}

// Solves the linear system of a fixed per-node policy and writes the interior
// values back into the full-grid vector.
void solve_policy(const Discretization& disc, const std::vector<int>& pol_a,
                  const std::vector<int>& pol_b, Eigen::VectorXd& full_values) {
  const long m = disc.size();
  const Mesh& mesh = disc.mesh();
  if (mesh.dim == 1) {
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0);
    Eigen::VectorXd rhs(m);
    for (long k = 0; k < m; ++k) {
      const NodeStencil& st = disc.stencil(k, pol_a[k], pol_b[k]);
      if (st.center <= 0.0) throw NumericalError("solve: singular discrete operator");
      diag[k] = st.center;
      rhs(k) = st.payoff;
      for (int q = 0; q < st.count; ++q) {
        const long nb = st.nb[q];
        if (nb == disc.flat(k) + 1 && k + 1 < m)
          upper[k] = -st.w[q];
        else if (nb == disc.flat(k) - 1 && k > 0)
          lower[k] = -st.w[q];
        else
          rhs(k) += st.w[q] * full_values(nb);  // boundary contribution
      }
    }
    const Eigen::VectorXd interior = thomas_solve(lower, diag, upper, rhs);
    for (long k = 0; k < m; ++k) full_values(disc.flat(k)) = interior(k);
    return;
  }

  // 2D: sparse direct solve.
  std::vector<long> flat_to_interior(mesh.total_points(), -1);
  for (long k = 0; k < m; ++k) flat_to_interior[disc.flat(k)] = k;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(m * 7);
  Eigen::VectorXd rhs(m);
  for (long k = 0; k < m; ++k) {
    const NodeStencil& st = disc.stencil(k, pol_a[k], pol_b[k]);
    if (st.center <= 0.0) throw NumericalError("solve: singular discrete operator");
    triplets.emplace_back(k, k, st.center);
    rhs(k) = st.payoff;
    for (int q = 0; q < st.count; ++q) {
      const long nb_interior = flat_to_interior[st.nb[q]];
      if (nb_interior >= 0)
        triplets.emplace_back(k, nb_interior, -st.w[q]);
      else
        rhs(k) += st.w[q] * full_values(st.nb[q]);
    }
  }
  Eigen::SparseMatrix<double> mat(m, m);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(mat);
  if (lu.info() != Eigen::Success) throw NumericalError("solve: sparse factorization failed");
  const Eigen::VectorXd interior = lu.solve(rhs);
  for (long k = 0; k < m; ++k) full_values(disc.flat(k)) = interior(k);
}

void fill_boundary(const GameModel& model, const Mesh& mesh, Eigen::VectorXd& values) {
  const bool artificial = mesh.domain.kind == DomainKind::whole_space;
  const int last = mesh.n + 1;
  auto set_node = [&](int i, int j) {
    const long flat = mesh.index(i, j);
    const Vec x = mesh.point(flat);
    values(flat) = artificial ? zeroth_order_balance(model, x) : model.g(x);
  };
  if (mesh.dim == 1) {
    set_node(0, 0);
    set_node(last, 0);
    return;
  }
  for (int i = 0; i <= last; ++i) {
    set_node(i, 0);
    set_node(i, last);
    set_node(0, i);
    set_node(last, i);
  }
}

struct ResidualInfo {
  double normalized = 0.0;
  double absolute = 0.0;
};

ResidualInfo isaacs_residual(const Discretization& disc, const Eigen::VectorXd& values) {
  const GameModel& model = disc.model();
  ResidualInfo res;
  for (long k = 0; k < disc.size(); ++k) {
    double best = 0.0;
    for (int ia = 0; ia < model.controls.n_a(); ++ia) {
      double inner = std::numeric_limits<double>::infinity();
      for (int ib = 0; ib < model.controls.n_b(); ++ib)
        inner = std::min(inner, disc.stencil(k, ia, ib).apply(values, disc.flat(k)));
      if (ia == 0 || inner > best) best = inner;
    }
    res.absolute = std::max(res.absolute, std::abs(best));
    res.normalized = std::max(res.normalized, std::abs(best) / disc.scale(k));
  }
  return res;
}

}  // namespace

double zeroth_order_balance(const GameModel& model, const Vec& x) {
  const int na = model.controls.n_a(), nb = model.controls.n_b();
  double min_c = std::numeric_limits<double>::infinity();
  double max_f = 0.0;
  for (int ia = 0; ia < na; ++ia)
    for (int ib = 0; ib < nb; ++ib) {
      min_c = std::min(min_c, model.c_at(ia, ib, x));
      max_f = std::max(max_f, std::abs(model.f_at(ia, ib, x)));
    }
  if (!(min_c > 0.0))
    throw NumericalError("zeroth-order balance needs strictly positive discount at the boundary");
  auto balance = [&](double v) {
    double outer = -std::numeric_limits<double>::infinity();
    for (int ia = 0; ia < na; ++ia) {
      double inner = std::numeric_limits<double>::infinity();
      for (int ib = 0; ib < nb; ++ib)
        inner = std::min(inner, model.f_at(ia, ib, x) - model.c_at(ia, ib, x) * v);
      outer = std::max(outer, inner);
    }
    return outer;
  };
  double bound = max_f / min_c + 1.0;
  while (balance(-bound) < 0.0 || balance(bound) > 0.0) bound *= 2.0;
  double lo = -bound, hi = bound;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (balance(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SolveResult solve_isaacs(const GameModel& model, const Mesh& mesh, const SolveOptions& opts) {
  model.controls.validate();
  Discretization disc(model, mesh);

  GridFunction gf(mesh);
  fill_boundary(model, mesh, gf.values);

  const long m = disc.size();
  const int na = model.controls.n_a(), nb = model.controls.n_b();
  std::vector<int> pol_a(m, 0), pol_b(m, 0);
  int solves = 0;
  // Finite policy space: the iteration cannot take more passes than policies.
  const long outer_cap =
      opts.max_iter > 0 ? opts.max_iter : static_cast<long>(na) * nb * m + 64;

  // Policy switches need to clear a round-off guard scaled to the local
  // operator magnitude; sub-guard ties keep the incumbent, which stops the
  // iteration from churning on 1-ulp differences.
  constexpr double kSwitchGuard = 64.0 * std::numeric_limits<double>::epsilon();
  auto guard = [&](long k) { return kSwitchGuard * disc.scale(k); };

  // For a fixed maximizer policy the inner minimization is a standard Howard
  // iteration; values decrease monotonically and settle finitely.
  auto exact_inner = [&]() {
    for (long pass = 0; pass <= static_cast<long>(nb) * m + 64; ++pass) {
      solve_policy(disc, pol_a, pol_b, gf.values);
      ++solves;
      bool changed = false;
      for (long k = 0; k < m; ++k) {
        const double current = disc.stencil(k, pol_a[k], pol_b[k]).apply(gf.values, disc.flat(k));
        double best = current - guard(k);
        int best_b = pol_b[k];
        for (int ib = 0; ib < nb; ++ib) {
          if (ib == pol_b[k]) continue;
          const double val = disc.stencil(k, pol_a[k], ib).apply(gf.values, disc.flat(k));
          if (val < best) {
            best = val;
            best_b = ib;
          }
        }
        if (best_b != pol_b[k]) {
          pol_b[k] = best_b;
          changed = true;
        }
      }
      if (!changed) return;
    }
    throw NumericalError("solve_isaacs: inner minimization failed to settle");
  };

  exact_inner();
  ResidualInfo res = isaacs_residual(disc, gf.values);

  for (long outer = 0; outer < outer_cap && res.normalized > opts.tol; ++outer) {
    bool changed = false;
    for (long k = 0; k < m; ++k) {
      const double current = disc.stencil(k, pol_a[k], pol_b[k]).apply(gf.values, disc.flat(k));
      double best = current + guard(k);
      int best_a = pol_a[k];
      for (int ia = 0; ia < na; ++ia) {
        if (ia == pol_a[k]) continue;
        double inner = std::numeric_limits<double>::infinity();
        for (int ib = 0; ib < nb; ++ib)
          inner = std::min(inner, disc.stencil(k, ia, ib).apply(gf.values, disc.flat(k)));
        if (inner > best) {
          best = inner;
          best_a = ia;
        }
      }
      if (best_a != pol_a[k]) {
        pol_a[k] = best_a;
        changed = true;
      }
    }
    if (!changed) break;
    exact_inner();
    res = isaacs_residual(disc, gf.values);
  }

  if (res.normalized > opts.tol) {
    std::ostringstream os;
    os << "solve_isaacs: did not reach tolerance " << opts.tol << " (last residual "
       << res.normalized << " after " << solves << " linear solves)";
    throw NumericalError(os.str());
  }

  SolveResult result;
  result.solution = std::move(gf);
  result.iterations = solves;
  result.residual = res.normalized;
  result.residual_abs = res.absolute;
  result.policy.resize(m);
  for (long k = 0; k < m; ++k) result.policy[k] = {pol_a[k], pol_b[k]};
  return result;
}

SolveResult solve_linear(const GameModel& model, const Mesh& mesh, const SolveOptions& opts) {
  model.controls.validate();
  if (model.controls.n_a() != 1 || model.controls.n_b() != 1)
    throw InputError("solve_linear: expects exactly one control pair");
  Discretization disc(model, mesh);

  GridFunction gf(mesh);
  fill_boundary(model, mesh, gf.values);
  const long m = disc.size();
  std::vector<int> pol_a(m, 0), pol_b(m, 0);
  solve_policy(disc, pol_a, pol_b, gf.values);
  const ResidualInfo res = isaacs_residual(disc, gf.values);
  if (res.normalized > opts.tol)
    throw NumericalError("solve_linear: direct solve left residual above tolerance");

  SolveResult result;
  result.solution = std::move(gf);
  result.iterations = 1;
  result.residual = res.normalized;
  result.residual_abs = res.absolute;
  result.policy.assign(m, {0, 0});
  return result;
}

SolveResult solve_with_truncation_check(const GameModel& model, double radius0, int n0,
                                        double roi_lo, double roi_hi, double roi_tol,
                                        const SolveOptions& opts, int max_doublings) {
  double radius = radius0;
  int n = n0;
  SolveResult current = solve_isaacs(model, Mesh(Domain::whole_space(radius), model.dim, n), opts);
  for (int d = 0; d < max_doublings; ++d) {
    const double radius2 = 2.0 * radius;
    const int n2 = 2 * n + 1;  // keeps h fixed
    SolveResult wider = solve_isaacs(model, Mesh(Domain::whole_space(radius2), model.dim, n2), opts);
    double shift = 0.0;
    const int probes = 101;
    for (int i = 0; i < probes; ++i) {
      const Vec x = vec1(roi_lo + (roi_hi - roi_lo) * i / (probes - 1));
      shift = std::max(shift, std::abs(current.solution.interpolate(x) - wider.solution.interpolate(x)));
    }
    if (shift < roi_tol) return wider;
    current = std::move(wider);
    radius = radius2;
    n = n2;
  }
  throw NumericalError("solve_with_truncation_check: region of interest not stable under radius doubling");
}

}  // namespace isaacs
