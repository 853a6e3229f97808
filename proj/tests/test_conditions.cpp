#include <doctest.h>

#include <cmath>

#include "isaacslab/builtins.hpp"
#include "isaacslab/conditions.hpp"
#include "isaacslab/rng.hpp"

using namespace isaacs;

TEST_CASE("transverse norm: vanishes in one dimension") {
  Mat sigma(1, 3);
  sigma << 0.7, -1.2, 0.4;
  CHECK(transverse_norm_sq(sigma, vec1(1.0)) == 0.0);
  CHECK(transverse_norm_sq(sigma, vec1(-1.0)) == 0.0);
}

TEST_CASE("transverse norm: 2x2 identity against a basis direction") {
  CHECK(transverse_norm_sq(Mat(Mat::Identity(2, 2)), vec2(1.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("transverse norm: rank-one sigma along xi vanishes") {
  const Vec xi = vec2(std::sqrt(0.5), -std::sqrt(0.5));
  Mat eta(1, 2);
  eta << 1.3, 0.4;
  const Mat sigma = xi * eta;
  CHECK(transverse_norm_sq(sigma, xi) <= 1e-14);
}

TEST_CASE("transverse norm: non-unit direction is an input error") {
  CHECK_THROWS_AS(transverse_norm_sq(Mat(Mat::Identity(2, 2)), vec2(1.0, 1.0)), InputError);
}

TEST_CASE("transverse norm: the two defining formulas agree and are convex") {
  PathRng rng(5, 0);
  auto random_sigma = [&]() {
    Mat s(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) s(i, j) = -1.0 + 2.0 * rng.uniform();
    return s;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    const Vec xi = vec2(std::cos(angle), std::sin(angle));
    const Mat s1 = random_sigma(), s2 = random_sigma();
    const double mid = transverse_norm_sq(Mat(0.5 * (s1 + s2)), xi);
    CHECK(mid <= 0.5 * (transverse_norm_sq(s1, xi) + transverse_norm_sq(s2, xi)) + 1e-12);
  }
}

TEST_CASE("ellipticity: isotropic diffusion meets its floor exactly") {
  GameModel m;
  m.dim = 2;
  m.noise_dim = 2;
  m.param_dim = 1;
  m.controls = {{"a0"}, {"b0"}, {}};
  m.sigma = [](int, int, const Vec&, const Vec&) {
    return Mat(std::numbers::sqrt2 * Mat::Identity(2, 2));
  };
  m.drift = [](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 0.0; };
  m.g = [](const Vec&) { return 0.0; };
  m.delta0 = 1.0;
  const ConditionReport report = check_ellipticity(m, SampleGrid::uniform_2d(-1.0, 1.0, 9));
  CHECK(report.satisfied);
  CHECK(report.worst_margin == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("ellipticity: bump diffusion is degenerate at the origin") {
  ModelBundle bundle = make_builtin("remark-6-1-1");
  bundle.model.delta0 = 0.01;
  const ConditionReport report = check_ellipticity(bundle.model, SampleGrid::uniform_1d(-4.0, 4.0, 81));
  CHECK_FALSE(report.satisfied);
  CHECK(report.worst_margin == doctest::Approx(0.01).epsilon(1e-12));

  bundle.model.delta0 = 0.0;  // any PSD diffusion passes a zero floor
  CHECK(check_ellipticity(bundle.model, SampleGrid::uniform_1d(-4.0, 4.0, 81)).satisfied);
}

TEST_CASE("coupling condition: Lipschitz coefficients pass once mu is tuned") {
  const ModelBundle bundle = make_builtin("generic-1d");
  ConditionParams params;
  params.delta = 1.0;
  params.delta1 = 0.5;
  params.eps0 = 0.1;
  const ConditionReport tuned =
      tune_mu(bundle.model, bundle.transport, params, PairSample::default_1d(-2.0, 2.0, 41));
  CHECK(tuned.satisfied);
  CHECK(tuned.params.mu >= 1.0);
}

TEST_CASE("coupling condition: decreasing 1D drift passes with mu = 0") {
  const GameModel m = ou_model(1.0, 1.0, 1.0, 0.0);  // drift -x, c = 1
  const TransportStructure transport = identity_transport(1, 1);
  ConditionParams params;
  params.delta = 1.0;  // c >= delta everywhere
  params.delta1 = 0.5;
  params.mu = 0.0;  // permitted for diagnostics, flagged in the report
  params.eps0 = 0.1;
  const ConditionReport report =
      check_coupling_condition(m, transport, params, PairSample::default_1d(-2.0, 2.0, 41));
  CHECK(report.satisfied);
  bool flagged = false;
  for (const auto& note : report.notes) flagged = flagged || note.find("mu < 1") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("coupling condition: expanding drift with a tiny diffusion floor fails") {
  // drift 2x, c = 1, delta = 2, mu = 1, a = 1e-3: the pair (0.1, 0) violates
  // the inequality by about 0.06.
  const GameModel m = linear_model(std::sqrt(2e-3), 0.0, 2.0, 1.0, 0.0, 0.0, 0.0);
  const TransportStructure transport = identity_transport(1, 1);
  ConditionParams params;
  params.delta = 2.0;
  params.delta1 = 1.0;
  params.mu = 1.0;
  params.eps0 = 0.1;
  PairSample sample;
  sample.ys = {vec1(0.0)};
  sample.directions = {vec1(1.0)};
  const ConditionReport report = check_coupling_condition(m, transport, params, sample);
  CHECK_FALSE(report.satisfied);
  CHECK(report.worst_margin >= 0.059);
  CHECK(report.worst_margin <= 0.061);
}

TEST_CASE("coupling condition: identity transport matches the plain two-point form") {
  const ModelBundle bundle = make_builtin("generic-1d");
  ConditionParams params;
  params.delta = 1.0;
  params.delta1 = 0.5;
  params.mu = 2.0;
  params.eps0 = 0.1;
  PairSample sample;
  sample.ys = {vec1(-0.7), vec1(0.2), vec1(1.4)};
  sample.directions = {vec1(1.0), vec1(-1.0)};
  sample.n_t = 5;
  const ConditionReport report =
      check_coupling_condition(bundle.model, bundle.transport, params, sample);

  // Re-derive the worst margin with sigma/drift evaluated directly.
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& y : sample.ys) {
    for (const Vec& xi : sample.directions) {
      for (int q = 0; q < sample.n_t; ++q) {
        const double t = sample.t_min * std::pow(params.eps0 / sample.t_min, double(q) / (sample.n_t - 1));
        const Vec x = y + t * xi;
        const double lhs = 2.0 * (x - y).dot(bundle.model.drift_at(0, 0, x) -
                                             bundle.model.drift_at(0, 0, y));
        const double rhs = 2.0 * (bundle.model.c_at(0, 0, y) - params.delta) * (x - y).squaredNorm() +
                           4.0 * params.mu * (x - y).dot(bundle.model.a_matrix_at(0, 0, x) * (x - y));
        worst = std::max(worst, lhs - rhs);
      }
    }
  }
  CHECK(report.worst_margin == doctest::Approx(worst).epsilon(1e-13));
}

TEST_CASE("coupling condition: margins never grow with mu") {
  const ModelBundle bundle = make_builtin("generic-1d");
  ConditionParams params;
  params.delta = 1.0;
  params.delta1 = 0.5;
  params.eps0 = 0.1;
  const PairSample sample = PairSample::default_1d(-1.0, 1.0, 11);
  double previous = std::numeric_limits<double>::infinity();
  for (double mu : {1.0, 2.0, 4.0, 8.0}) {
    params.mu = mu;
    const double margin =
        check_coupling_condition(bundle.model, bundle.transport, params, sample).worst_margin;
    CHECK(margin <= previous + 1e-15);
    previous = margin;
  }
}

TEST_CASE("differential condition: constant coefficients reduce to a discount threshold") {
  GameModel m = constant_model(1.0, 0.5, 0.2, 0.0, 0.0);
  VectorField r0 = [](int, int, const Vec&) { return vec1(0.0); };
  MatrixField p0 = [](int, int, const Vec&) { return Mat(Mat::Zero(1, 1)); };
  ThetaField th0 = [](int, int, const Vec&, const Vec&) { return Mat(Mat::Zero(1, 1)); };
  const TransportStructure transport = differential_transport(m, r0, p0, th0);

  ConditionParams params;
  params.delta1 = 0.05;
  params.delta = 0.1;
  params.mu = 1.0;
  params.eps0 = 0.1;
  const std::vector<Vec> xs = {vec1(-1.0), vec1(0.0), vec1(1.0)};
  const std::vector<Vec> dirs = {vec1(1.0), vec1(-1.0)};
  // c = 0.2 >= delta1 + delta = 0.15 and the left side is zero: satisfied.
  CHECK(check_coupling_condition_differential(m, transport, params, dirs, xs).satisfied);
  params.delta = 0.25;  // now c < delta1 + delta with zero diffusion: violated
  m.sigma = [](int, int, const Vec&, const Vec&) { return Mat(Mat::Zero(1, 1)); };
  const TransportStructure t2 = differential_transport(m, r0, p0, th0);
  CHECK_FALSE(check_coupling_condition_differential(m, t2, params, dirs, xs).satisfied);
}

TEST_CASE("differential condition: missing fields are a configuration error") {
  GameModel m = constant_model(1.0, 0.0, 1.0, 0.0, 0.0);
  const TransportStructure transport = identity_transport(1, 1);
  CHECK_THROWS_AS(check_coupling_condition_differential(m, transport, {}, {vec1(1.0)}, {vec1(0.0)}),
                  ConfigError);
}

TEST_CASE("differential condition: r-field variant of the bump diffusion") {
  const double eps = 0.05;
  const ModelBundle bundle = bump_diffusion_bundle(256, 1.2, eps, /*use_p_field=*/false);
  // Closed form of the left side: 2 cosh^-2(u) inside the indicator window,
  // -2 cosh^-2(u) outside (the r field overshoots by design).
  auto closed_form = [&](int ia, double x) {
    const double alpha = 2.0 * std::numbers::pi * ia / 256;
    const double u = x + 2.0 * std::cos(alpha);
    const double sech2 = 1.0 / (std::cosh(u) * std::cosh(u));
    return std::abs(u) <= eps ? 2.0 * sech2 : -2.0 * sech2;
  };
  for (int ia : {0, 40, 97, 180}) {
    for (double x : {-1.0, -0.2, 0.6, 1.02}) {
      const double lhs = differential_condition_lhs(bundle.model, bundle.transport, ia, 0, vec1(x),
                                                    vec1(1.0));
      CHECK(lhs == doctest::Approx(closed_form(ia, x)).epsilon(1e-6));
    }
  }

  // Discount threshold: with c = 1.2 the worst left side (about 2) passes
  // 2 (c - delta1 - delta); with c = 0.9 it cannot.
  ConditionParams params;
  params.delta1 = 0.02;
  params.delta = 0.04;
  params.mu = 1.0;
  std::vector<Vec> xs;
  for (int i = 0; i <= 42; ++i) xs.push_back(vec1(-1.05 + 2.1 * i / 42.0));
  const std::vector<Vec> dirs = {vec1(1.0), vec1(-1.0)};
  CHECK(check_coupling_condition_differential(bundle.model, bundle.transport, params, dirs, xs)
            .satisfied);
  const ModelBundle low_c = bump_diffusion_bundle(256, 0.9, eps, false);
  CHECK_FALSE(
      check_coupling_condition_differential(low_c.model, low_c.transport, params, dirs, xs)
          .satisfied);
}

TEST_CASE("differential condition: both compensating fields erase the left side") {
  const double eps = 0.05;
  const ModelBundle bundle = bump_diffusion_bundle(256, 0.1, eps, /*use_p_field=*/true);
  ConditionParams params;
  params.delta1 = 0.02;
  params.delta = 0.04;
  params.mu = 1.0;
  std::vector<Vec> xs;
  for (int i = 0; i <= 20; ++i) xs.push_back(vec1(-1.05 + 2.1 * i / 20.0));
  // Only c >= delta2 is needed once the p field joins in.
  CHECK(check_coupling_condition_differential(bundle.model, bundle.transport, params,
                                              {vec1(1.0), vec1(-1.0)}, xs)
            .satisfied);
}

TEST_CASE("slack index search: gentle, steep, and trivial drifts") {
  auto zero = [](double) { return 0.0; };
  auto one = [](double) { return 1.0; };

  const CouplingIndexResult gentle = find_coupling_n(
      zero, [](double x) { return 0.5 * x; }, [](double) { return 0.5; }, one);
  REQUIRE(gentle.status == CouplingIndexResult::Status::found);
  CHECK(gentle.n == 2);
  // minimality: n - 1 fails at the origin
  CHECK(0.5 > 1.0 - 1.0 / (gentle.n - 1) + (gentle.n - 1) * 0.0);

  const CouplingIndexResult steep = find_coupling_n(
      zero, [](double x) { return 2.0 * x; }, [](double) { return 2.0; }, one);
  CHECK(steep.status == CouplingIndexResult::Status::necessary_violated);
  CHECK_FALSE(steep.necessary_holds);
  CHECK(std::abs(steep.witness_x) <= 1e-12);

  const CouplingIndexResult trivial = find_coupling_n(zero, zero, zero, one);
  REQUIRE(trivial.status == CouplingIndexResult::Status::found);
  CHECK(trivial.n == 1);
}

TEST_CASE("slack index search: exhaustion with the necessary condition intact is inconclusive") {
  auto zero = [](double) { return 0.0; };
  // b'(x) = 0.9 everywhere with b never vanishing except at huge slack: force
  // exhaustion by capping n_max at 1 while the necessary condition holds.
  const CouplingIndexResult r = find_coupling_n(
      zero, [](double x) { return 0.5 * x; }, [](double) { return 0.5; },
      [](double) { return 1.0; }, -2.0, 2.0, /*n_max=*/1);
  CHECK(r.status == CouplingIndexResult::Status::inconclusive);
  CHECK(r.necessary_holds);
}
