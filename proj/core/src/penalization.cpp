#include "isaacslab/penalization.hpp"

#include <cmath>

namespace isaacs {

namespace {

void verify_beta_independent(const GameModel& base, const A2Extension& ext) {
  if (base.controls.n_b() < 2) return;  // nothing to compare against
  const Vec p0 = base.zero_param();
  for (int i = 0; i <= 8; ++i) {
    Vec x = Vec::Zero(base.dim);
    x(0) = -2.0 + 0.5 * i;
    for (size_t a2 = 0; a2 < ext.labels.size(); ++a2) {
      const int ia = static_cast<int>(a2);
      const Mat s0 = ext.sigma(ia, 0, p0, x);
      const Vec b0 = ext.drift(ia, 0, p0, x);
      const double c0 = ext.c(ia, 0, p0, x);
      const double f0 = ext.f(ia, 0, p0, x);
      for (int ib = 1; ib < base.controls.n_b(); ++ib) {
        if ((ext.sigma(ia, ib, p0, x) - s0).cwiseAbs().maxCoeff() > 0.0 ||
            (ext.drift(ia, ib, p0, x) - b0).cwiseAbs().maxCoeff() > 0.0 ||
            ext.c(ia, ib, p0, x) != c0 || ext.f(ia, ib, p0, x) != f0)
          throw ConfigError("penalization: auxiliary coefficients depend on beta");
      }
    }
  }
}

}  // namespace

GameModel build_penalized_model(const GameModel& base, const A2Extension& extension, double K) {
  base.controls.validate();
  if (K < 0.0) throw ConfigError("penalization: K must be nonnegative");
  if (extension.labels.empty()) throw ConfigError("penalization: empty auxiliary control list");
  for (const auto& l : extension.labels)
    for (const auto& m : base.controls.a_controls)
      if (l == m) throw ConfigError("penalization: auxiliary label '" + l + "' overlaps base controls");
  verify_beta_independent(base, extension);

  GameModel merged = base;
  merged.controls.a_controls.insert(merged.controls.a_controls.end(), extension.labels.begin(),
                                    extension.labels.end());
  merged.controls.a2_controls.clear();  // labels are absorbed into the merged maximizer list
  const int n_base = base.controls.n_a();
  const GameModel base_copy = base;
  const A2Extension ext = extension;

  merged.sigma = [base_copy, ext, n_base](int a, int b, const Vec& p, const Vec& x) {
    return a < n_base ? base_copy.sigma(a, b, p, x) : ext.sigma(a - n_base, b, p, x);
  };
  merged.drift = [base_copy, ext, n_base](int a, int b, const Vec& p, const Vec& x) {
    return a < n_base ? base_copy.drift(a, b, p, x) : ext.drift(a - n_base, b, p, x);
  };
  merged.c = [base_copy, ext, n_base](int a, int b, const Vec& p, const Vec& x) {
    return a < n_base ? base_copy.c(a, b, p, x) : ext.c(a - n_base, b, p, x);
  };
  merged.f = [base_copy, ext, n_base, K](int a, int b, const Vec& p, const Vec& x) {
    return a < n_base ? base_copy.f(a, b, p, x) : ext.f(a - n_base, b, p, x) - K;
  };
  return merged;
}

PenalizeSweepResult sweep_k(const GameModel& base, const A2Extension& extension,
                            const std::vector<double>& k_list, const Mesh& mesh,
                            const SolveResult& v_reference, const SolveOptions& opts,
                            bool check_truncation) {
  PenalizeSweepResult result;
  const int n_base = base.controls.n_a();
  const Eigen::VectorXd& ref = v_reference.solution.values;

  std::vector<double> ks_for_fit, gaps_for_fit;
  for (double K : k_list) {
    const GameModel penalized = build_penalized_model(base, extension, K);
    const SolveResult solved = solve_isaacs(penalized, mesh, opts);
    PenalizeSweepEntry entry;
    entry.k = K;
    entry.iterations = solved.iterations;
    const Eigen::VectorXd diff = solved.solution.values - ref;
    entry.sup_gap = diff.maxCoeff();
    entry.min_gap = diff.minCoeff();
    for (const auto& [pa, pb] : solved.policy)
      if (pa >= n_base) ++entry.a2_active_nodes;
    result.entries.push_back(entry);
    if (K >= 4.0 && entry.sup_gap > 0.0) {
      ks_for_fit.push_back(K);
      gaps_for_fit.push_back(entry.sup_gap);
    }
  }
  if (ks_for_fit.size() >= 2) {
    const auto [slope, err] = fit_loglog(ks_for_fit, gaps_for_fit);
    result.fitted_slope = slope;
    result.slope_stderr = err;
  }

  if (check_truncation && !k_list.empty() && mesh.domain.kind == DomainKind::whole_space) {
    // Gap sensitivity to the truncation radius at the stiffest K.
    const double k_max = k_list.back();
    const Mesh wide(Domain::whole_space(2.0 * mesh.domain.truncation_radius), mesh.dim,
                    2 * mesh.n + 1);
    const SolveResult base_wide = solve_isaacs(base, wide, opts);
    const SolveResult pen_wide =
        solve_isaacs(build_penalized_model(base, extension, k_max), wide, opts);
    const double gap_wide =
        (pen_wide.solution.values - base_wide.solution.values).maxCoeff();
    result.truncation_shift = std::abs(gap_wide - result.entries.back().sup_gap);
  }
  return result;
}

}  // namespace isaacs
