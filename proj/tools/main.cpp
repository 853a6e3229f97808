// Command-line front end: model configs in, CSV artifacts out, one manifest
// per run.  Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "isaacslab/builtins.hpp"
#include "isaacslab/conditions.hpp"
#include "isaacslab/csv.hpp"
#include "isaacslab/estimators.hpp"
#include "isaacslab/penalization.hpp"
#include "isaacslab/scenarios.hpp"
#include "isaacslab/sweeps.hpp"

namespace {

using namespace isaacs;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

RunManifest start_manifest(const std::string& command, const ModelBundle& bundle) {
  RunManifest manifest;
  manifest.command = command;
  manifest.add("model", bundle.name);
  for (const auto& [k, v] : bundle.resolved.items()) manifest.add(k, v);
  return manifest;
}

void finish(RunManifest& manifest, const Timer& timer, const std::string& out_path) {
  manifest.wall_time_s = timer.seconds();
  manifest.write(out_path + ".manifest");
}

int cmd_solve(const std::string& model_ref, int n, double tol, const std::string& out_path) {
  Timer timer;
  const ModelBundle bundle = load_model(model_ref);
  RunManifest manifest = start_manifest("solve", bundle);
  manifest.add("n", double(n));
  manifest.add("tol", tol);

  SolveOptions opts;
  opts.tol = tol;
  const Mesh mesh(bundle.domain, bundle.model.dim, n);
  const SolveResult result = solve_isaacs(bundle.model, mesh, opts);

  CsvFile csv(out_path, manifest);
  if (bundle.model.dim == 1) {
    csv.header({"x", "v"});
    for (int i = 0; i <= mesh.n + 1; ++i) csv.row({mesh.coord(i), result.solution(i)});
  } else {
    csv.header({"x1", "x2", "v"});
    for (int i = 0; i <= mesh.n + 1; ++i)
      for (int j = 0; j <= mesh.n + 1; ++j)
        csv.row({mesh.coord(i), mesh.coord(j), result.solution(i, j)});
  }
  csv.close();
  finish(manifest, timer, out_path);
  std::cout << "solved: " << result.iterations << " linear solves, residual " << result.residual
            << ", output " << out_path << "\n";
  return 0;
}

int cmd_check_conditions(const std::string& model_ref, const std::string& conditions_ref,
                         const std::string& out_path) {
  Timer timer;
  const ModelBundle bundle = load_model(model_ref);
  KvConfig conditions;
  if (!conditions_ref.empty()) conditions = KvConfig::parse_file(conditions_ref);
  RunManifest manifest = start_manifest("check-conditions", bundle);
  for (const auto& [k, v] : conditions.items()) manifest.add("conditions." + k, v);

  ConditionParams params;
  params.delta = conditions.get_double("conditions.delta", 1.0);
  params.delta1 = conditions.get_double("conditions.delta1", 0.5);
  params.mu = conditions.get_double("conditions.mu", 1.0);
  params.eps0 = conditions.get_double("conditions.eps0", 0.1);
  const double lo = conditions.get_double("conditions.lo", -2.0);
  const double hi = conditions.get_double("conditions.hi", 2.0);
  const int count = static_cast<int>(conditions.get_int("conditions.points", 201));

  const SampleGrid grid = bundle.model.dim == 1 ? SampleGrid::uniform_1d(lo, hi, count)
                                                : SampleGrid::uniform_2d(lo, hi, 41);
  const ConditionReport elliptic = check_ellipticity(bundle.model, grid);

  const PairSample pairs = bundle.model.dim == 1 ? PairSample::default_1d(lo, hi, count)
                                                 : PairSample::default_2d(lo, hi, 21, 64);
  const ConditionReport coupling = check_coupling_condition(bundle.model, bundle.transport, params, pairs);

  std::optional<ConditionReport> differential;
  if (bundle.transport.has_differential) {
    std::vector<Vec> xs, dirs;
    for (int i = 0; i < count; ++i) xs.push_back(vec1(lo + (hi - lo) * i / (count - 1)));
    dirs = {vec1(1.0), vec1(-1.0)};
    differential = check_coupling_condition_differential(bundle.model, bundle.transport, params, dirs, xs);
  }

  auto verdict = [](const ConditionReport& r) { return r.satisfied ? "satisfied" : "violated"; };
  std::cout << "ellipticity:          " << verdict(elliptic) << " (worst margin "
            << elliptic.worst_margin << ")\n";
  std::cout << "coupling condition:   " << verdict(coupling) << " (worst margin "
            << coupling.worst_margin << ")\n";
  if (differential)
    std::cout << "differential variant: " << verdict(*differential) << " (worst margin "
              << differential->worst_margin << ")\n";

  CsvFile csv(out_path, manifest);
  csv.header({"check", "satisfied", "worst_margin", "mu", "delta", "delta1", "eps0"});
  csv.row({0, double(elliptic.satisfied), elliptic.worst_margin, params.mu, params.delta,
           params.delta1, params.eps0});
  csv.row({1, double(coupling.satisfied), coupling.worst_margin, params.mu, params.delta,
           params.delta1, params.eps0});
  if (differential)
    csv.row({2, double(differential->satisfied), differential->worst_margin, params.mu,
             params.delta, params.delta1, params.eps0});
  csv.close();
  finish(manifest, timer, out_path);
  const bool all_ok = elliptic.satisfied && coupling.satisfied &&
                      (!differential || differential->satisfied);
  std::cout << (all_ok ? "all checks satisfied\n" : "some checks violated\n");
  return 0;
}

int cmd_mc_verify(const std::string& model_ref, const std::string& transport_kind,
                  const std::string& lemma, long paths, double dt, std::uint64_t seed,
                  const std::string& out_path) {
  Timer timer;
  ModelBundle bundle = load_model(model_ref);
  if (transport_kind == "identity")
    bundle.transport = identity_transport(bundle.model.noise_dim, bundle.model.param_dim);
  else if (transport_kind == "rotation")
    bundle.transport = rotation_transport(bundle.model);
  else if (!transport_kind.empty() && transport_kind != "default")
    throw ConfigError("mc-verify: unknown transport '" + transport_kind + "'");

  RunManifest manifest = start_manifest("mc-verify", bundle);
  manifest.add("lemma", lemma);
  manifest.add("paths", double(paths));
  manifest.add("dt", dt);
  manifest.add("seed", double(seed));

  MCConfig cfg;
  cfg.dt = dt;
  cfg.n_paths = paths;
  cfg.base_seed = seed;
  cfg.horizon = 12.0;
  cfg.epsilon = 0.01;
  cfg.lambda = 0.1;
  cfg.delta = 1.0;
  cfg.delta1 = 0.5;
  cfg.start = Vec::Zero(bundle.model.dim);

  CsvFile csv(out_path, manifest);
  csv.header({"estimate", "std_error", "bound", "verdict"});
  auto emit = [&](const EstimateReport& rep) {
    csv.row({rep.estimate, rep.std_error, rep.bound, rep.within_bound ? 1.0 : 0.0});
    std::cout << lemma << ": estimate " << rep.estimate << " +- " << rep.std_error;
    if (std::isfinite(rep.bound)) std::cout << " (bound " << rep.bound << ")";
    std::cout << (rep.within_bound ? " ok" : " violated") << "\n";
  };

  if (lemma == "2.3.1") {
    const JIReports reports = estimate_j_i(bundle.model, bundle.transport, cfg);
    emit(reports.j);
    emit(reports.i);
  } else if (lemma == "4.7.1") {
    emit(estimate_exit_decay(bundle.model, bundle.transport, cfg));
  } else if (lemma == "4.7.3") {
    cfg.delta = 2.0;
    cfg.delta1 = 1.0;
    emit(estimate_rho_sup(bundle.model, bundle.transport, cfg));
  } else if (lemma == "2.14.1") {
    cfg.delta = 2.0;
    cfg.delta1 = 1.0;
    emit(estimate_coupling_discount(bundle.model, bundle.transport, cfg));
  } else if (lemma == "6.4.1") {
    cfg.delta = 2.0;
    cfg.delta1 = 1.0;
    emit(estimate_xi_second_moment(bundle.model, bundle.transport, cfg, 2.0));
  } else if (lemma == "representation") {
    const Mesh mesh(bundle.domain, bundle.model.dim, 32767);
    const SolveResult oracle = solve_linear(bundle.model, mesh);
    cfg.drift_form = DriftCoupling::martingale;
    cfg.epsilon = 0.05;
    cfg.lambda = 0.5;
    cfg.delta = 2.0;
    cfg.delta1 = 1.0;
    cfg.z0 = 1.5;
    cfg.start = vec1(0.3);
    emit(verify_representation(bundle.model, bundle.transport, cfg, oracle, 1.0));
  } else {
    throw ConfigError("mc-verify: lemma must be one of 2.3.1, 4.7.1, 4.7.3, 2.14.1, 6.4.1, representation");
  }
  csv.close();
  finish(manifest, timer, out_path);
  return 0;
}

int cmd_sweep_delta0(const std::string& model_ref, int n, const std::string& out_path) {
  Timer timer;
  const ModelBundle bundle = load_model(model_ref);
  RunManifest manifest = start_manifest("sweep-delta0", bundle);
  manifest.add("n", double(n));

  const double b = bundle.resolved.get_double("model.b", bundle.name == "example-5-30-1-b2" ? 2.0 : 0.5);
  auto family = [b](double delta0) { return scaling_drift_model(delta0, b); };
  const Mesh mesh(Domain::interval(-1.0, 1.0), 1, n);
  const SweepReport report =
      sweep_delta0(family, {1e-1, 1e-2, 1e-3, 1e-4}, mesh, -0.9, 0.9);

  CsvFile csv(out_path, manifest);
  csv.header({"param", "lipschitz", "exponent"});
  for (const auto& e : report.entries) csv.row({e.param, e.value, report.fitted_exponent});
  csv.close();
  finish(manifest, timer, out_path);
  std::cout << "fitted exponent " << report.fitted_exponent << " (" << report.verdict << ")\n";
  return 0;
}

int cmd_interior_probe(const std::string& model_ref, const std::string& out_path) {
  Timer timer;
  const ModelBundle bundle = load_model(model_ref);
  RunManifest manifest = start_manifest("interior-probe", bundle);

  GameModel model = bundle.model;
  // Continuous, non-Lipschitz boundary data for the interior estimate.
  model.g = [](const Vec& x) { return std::sqrt(std::abs(1.0 - x(0))); };
  const SweepReport report = interior_lipschitz_probe(model, Domain::interval(-1.0, 1.0),
                                                      {201, 401, 801, 1601}, -0.5, 0.5);
  CsvFile csv(out_path, manifest);
  csv.header({"param", "lipschitz", "exponent"});
  for (const auto& e : report.entries) csv.row({e.param, e.value, report.fitted_exponent});
  csv.close();
  finish(manifest, timer, out_path);
  std::cout << "interior estimates " << report.verdict << "\n";
  return 0;
}

int cmd_penalize_sweep(const std::string& model_ref, double kmin, double kmax, double kfactor,
                       int n, const std::string& out_path) {
  Timer timer;
  const ModelBundle bundle = load_model(model_ref);
  if (!bundle.a2) throw ConfigError("penalize-sweep: model carries no auxiliary controls");
  RunManifest manifest = start_manifest("penalize-sweep", bundle);
  manifest.add("kmin", kmin);
  manifest.add("kmax", kmax);
  manifest.add("kfactor", kfactor);
  manifest.add("n", double(n));

  std::vector<double> ks;
  for (double k = kmin; k <= kmax * (1.0 + 1e-12); k *= kfactor) ks.push_back(k);
  const Mesh mesh(bundle.domain, bundle.model.dim, n);
  const SolveResult v_ref = solve_isaacs(bundle.model, mesh);
  const PenalizeSweepResult sweep = sweep_k(bundle.model, *bundle.a2, ks, mesh, v_ref, {}, true);

  CsvFile csv(out_path, manifest);
  csv.header({"K", "sup_gap", "min_gap", "a2_nodes", "slope"});
  for (const auto& e : sweep.entries)
    csv.row({e.k, e.sup_gap, e.min_gap, double(e.a2_active_nodes), sweep.fitted_slope});
  csv.close();
  finish(manifest, timer, out_path);
  std::cout << "fitted slope " << sweep.fitted_slope << ", truncation shift "
            << sweep.truncation_shift << "\n";
  return 0;
}

int cmd_reproduce(const std::string& recipe, const std::string& out_path) {
  Timer timer;
  const ScenarioOutcome outcome = run_scenario(recipe);
  RunManifest manifest;
  manifest.command = "reproduce";
  manifest.add("recipe", recipe);

  CsvFile csv(out_path, manifest);
  csv.header(outcome.csv_header);
  for (const auto& row : outcome.csv_rows) csv.row(row);
  csv.close();
  finish(manifest, timer, out_path);
  std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << outcome.name << ": " << outcome.detail
            << "\n";
  return outcome.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for value functions of stochastic differential games"};
  app.require_subcommand(1);

  std::string model_ref, out_path = "out.csv", conditions_ref, transport_kind = "default";
  std::string lemma = "2.3.1", recipe;
  int n = 201;
  double tol = 1e-10, dt = 1e-3;
  long paths = 10000;
  std::uint64_t seed = 1;
  double kmin = 4, kmax = 128, kfactor = 2;

  auto* solve = app.add_subcommand("solve", "Solve the Isaacs equation on a mesh");
  solve->add_option("--model", model_ref, "model config path or builtin name")->required();
  solve->add_option("--n", n, "interior nodes per axis");
  solve->add_option("--tol", tol, "residual tolerance");
  solve->add_option("--out", out_path, "output CSV");

  auto* check = app.add_subcommand("check-conditions", "Verify structural conditions on sampling meshes");
  check->add_option("--model", model_ref)->required();
  check->add_option("--conditions", conditions_ref, "conditions config path");
  check->add_option("--out", out_path);

  auto* mc = app.add_subcommand("mc-verify", "Monte Carlo checks of the coupled-pair estimates");
  mc->add_option("--model", model_ref)->required();
  mc->add_option("--transport", transport_kind, "identity | rotation | default");
  mc->add_option("--lemma", lemma, "2.3.1 | 4.7.1 | 4.7.3 | 2.14.1 | 6.4.1 | representation");
  mc->add_option("--paths", paths);
  mc->add_option("--dt", dt);
  mc->add_option("--seed", seed);
  mc->add_option("--out", out_path);

  auto* sweep = app.add_subcommand("sweep-delta0", "Lipschitz estimates against the ellipticity floor");
  sweep->add_option("--model", model_ref)->required();
  sweep->add_option("--n", n);
  sweep->add_option("--out", out_path);

  auto* probe = app.add_subcommand("interior-probe", "Interior Lipschitz estimates under refinement");
  probe->add_option("--model", model_ref)->required();
  probe->add_option("--out", out_path);

  auto* pen = app.add_subcommand("penalize-sweep", "Penalty-weight sweep of the auxiliary-control game");
  pen->add_option("--model", model_ref)->required();
  pen->add_option("--kmin", kmin);
  pen->add_option("--kmax", kmax);
  pen->add_option("--kfactor", kfactor);
  pen->add_option("--n", n);
  pen->add_option("--out", out_path);

  auto* rep = app.add_subcommand("reproduce", "Run a named verification recipe");
  rep->add_option("recipe", recipe, "recipe name")->required();
  rep->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(model_ref, n, tol, out_path);
    if (check->parsed()) return cmd_check_conditions(model_ref, conditions_ref, out_path);
    if (mc->parsed()) return cmd_mc_verify(model_ref, transport_kind, lemma, paths, dt, seed, out_path);
    if (sweep->parsed()) return cmd_sweep_delta0(model_ref, n, out_path);
    if (probe->parsed()) return cmd_interior_probe(model_ref, out_path);
    if (pen->parsed()) return cmd_penalize_sweep(model_ref, kmin, kmax, kfactor, n, out_path);
    if (rep->parsed()) return cmd_reproduce(recipe, out_path);
  } catch (const isaacs::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const isaacs::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
