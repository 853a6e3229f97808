#include "isaacslab/sweeps.hpp"

#include <cmath>
#include <sstream>

namespace isaacs {

std::pair<double, double> fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t m = xs.size();
  if (m != ys.size() || m < 2) throw InputError("fit_loglog: need at least two points");
  std::vector<double> lx(m), ly(m);
  for (size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw InputError("fit_loglog: inputs must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InputError("fit_loglog: degenerate abscissae");
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double fit = my + slope * (lx[i] - mx);
    ss_res += (ly[i] - fit) * (ly[i] - fit);
  }
  const double stderr_slope = m > 2 ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
  return {slope, stderr_slope};
}

SweepReport sweep_delta0(const std::function<GameModel(double)>& family,
                         const std::vector<double>& delta0_list, const Mesh& mesh,
                         double region_lo, double region_hi, const SolveOptions& opts) {
  SweepReport report;
  std::vector<double> params, values;
  for (double delta0 : delta0_list) {
    SweepEntry entry;
    entry.param = delta0;
    try {
      const GameModel model = family(delta0);
      const SolveResult solved = solve_isaacs(model, mesh, opts);
      entry.value = lipschitz_estimate(solved.solution, region_lo, region_hi);
      entry.extra["iterations"] = solved.iterations;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "delta0 = " << delta0 << ": " << e.what();
      throw NumericalError(os.str());
    }
    params.push_back(entry.param);
    values.push_back(entry.value);
    report.entries.push_back(std::move(entry));
  }
  const auto [slope, err] = fit_loglog(params, values);
  report.fitted_exponent = slope;
  report.exponent_stderr = err;
  report.verdict = std::abs(slope) < 0.1 ? "bounded" : (slope < 0.0 ? "growing" : "decaying");
  return report;
}

SweepReport interior_lipschitz_probe(const GameModel& model, const Domain& domain,
                                     const std::vector<int>& n_list, double region_lo,
                                     double region_hi, const SolveOptions& opts) {
  domain.validate();
  if (!domain.bounded()) throw InputError("interior probe: domain must be bounded");
  if (region_lo - domain.lo() < 0.1 || domain.hi() - region_hi < 0.1)
    throw InputError("interior probe: region must keep distance >= 0.1 from the boundary");
  if (!(region_lo < region_hi)) throw InputError("interior probe: empty region");

  SweepReport report;
  std::vector<double> hs, values;
  for (int n : n_list) {
    const Mesh mesh(domain, model.dim, n);
    const SolveResult solved = solve_isaacs(model, mesh, opts);
    SweepEntry entry;
    entry.param = mesh.h;
    entry.value = lipschitz_estimate(solved.solution, region_lo, region_hi);
    hs.push_back(entry.param);
    values.push_back(entry.value);
    report.entries.push_back(std::move(entry));
  }
  const auto [slope, err] = fit_loglog(hs, values);
  report.fitted_exponent = slope;
  report.exponent_stderr = err;
  const size_t m = values.size();
  if (m >= 2) {
    const double last = values[m - 1], prev = values[m - 2];
    report.verdict = std::abs(last - prev) <= 0.10 * std::max(std::abs(last), std::abs(prev))
                         ? "bounded"
                         : "growing";
  }
  return report;
}

}  // namespace isaacs
