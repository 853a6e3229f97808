#include "isaacslab/game_model.hpp"

#include <cmath>
#include <set>

namespace isaacs {

void ControlGrid::validate() const {
  if (a_controls.empty()) throw ConfigError("control grid: empty a-control list");
  if (b_controls.empty()) throw ConfigError("control grid: empty b-control list");
  std::set<std::string> seen;
  for (const auto& l : a_controls)
    if (!seen.insert(l).second) throw ConfigError("control grid: duplicate a-label '" + l + "'");
  seen.clear();
  for (const auto& l : b_controls)
    if (!seen.insert(l).second) throw ConfigError("control grid: duplicate b-label '" + l + "'");
  seen.clear();
  for (const auto& l : a2_controls)
    if (!seen.insert(l).second) throw ConfigError("control grid: duplicate a2-label '" + l + "'");
  for (const auto& l : a2_controls)
    for (const auto& m : a_controls)
      if (l == m) throw ConfigError("control grid: a2-label '" + l + "' overlaps a-controls");
}

Mat GameModel::a_matrix(int a, int b, const Vec& p, const Vec& x) const {
  Mat s = sigma(a, b, p, x);
  return 0.5 * (s * s.transpose());
}

HamiltonianResult hamiltonian(const GameModel& model, const Vec& p, const Vec& x,
                              double u, const Vec& du, const Mat& d2u) {
  model.controls.validate();
  if ((d2u - Mat(d2u.transpose())).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + d2u.cwiseAbs().maxCoeff()))
    throw InputError("hamiltonian: d2u is not symmetric");

  HamiltonianResult best;
  const int na = model.controls.n_a();
  const int nb = model.controls.n_b();
  for (int ia = 0; ia < na; ++ia) {
    double inner = 0.0;
    int inner_beta = -1;
    for (int ib = 0; ib < nb; ++ib) {
      const Mat a = model.a_matrix(ia, ib, p, x);
      const Vec b = model.drift(ia, ib, p, x);
      const double val = (a.cwiseProduct(d2u)).sum() + b.dot(du) -
                         model.c(ia, ib, p, x) * u + model.f(ia, ib, p, x);
      if (inner_beta < 0 || val < inner) {
        inner = val;
        inner_beta = ib;
      }
    }
    if (best.alpha < 0 || inner > best.value) {
      best.value = inner;
      best.alpha = ia;
      best.beta = inner_beta;
    }
  }
  return best;
}

}  // namespace isaacs
