#include <doctest.h>

#include <cmath>

#include "isaacslab/builtins.hpp"
#include "isaacslab/rng.hpp"
#include "isaacslab/solver.hpp"
#include "isaacslab/sweeps.hpp"

using namespace isaacs;

TEST_CASE("solver: constant balance gives the constant solution to round-off") {
  // a = 1, b = 0, c = 1, f = 1, g = 1: v == 1
  const GameModel m = constant_model(std::numbers::sqrt2, 0.0, 1.0, 1.0, 1.0);
  const SolveResult r = solve_isaacs(m, Mesh(Domain::interval(-1.0, 1.0), 1, 201));
  CHECK((r.solution.values.array() - 1.0).abs().maxCoeff() <= 1e-13);
  CHECK(r.residual <= 1e-13);
}

TEST_CASE("solver: discrete harmonic with linear data is exact at the nodes") {
  const GameModel m = linear_model(std::numbers::sqrt2, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0);
  const Mesh mesh(Domain::interval(-1.0, 1.0), 1, 157);
  const SolveResult r = solve_isaacs(m, mesh);
  for (int i = 0; i <= mesh.n + 1; ++i)
    CHECK(r.solution(i) == doctest::Approx(mesh.coord(i)).epsilon(1e-12));
}

TEST_CASE("solver: scaling-drift value at x = 0.5 against the dense oracle") {
  // b = 0.5, delta0 = 1e-3: the degenerate limit value is x^2 = 0.25 there.
  const GameModel m = scaling_drift_model(1e-3, 0.5);
  const Mesh dense(Domain::interval(-1.0, 1.0), 1, 16383);
  const SolveResult oracle = solve_linear(m, dense);
  const double v_star = oracle.solution(12288);  // node at x = 0.5
  CHECK(std::abs(v_star - 0.25) <= 5e-3);

  const Mesh mesh(Domain::interval(-1.0, 1.0), 1, 2001);
  const SolveResult r = solve_isaacs(m, mesh);
  CHECK(std::abs(r.solution.interpolate(vec1(0.5)) - v_star) <= 2e-3);
}

TEST_CASE("solver: game path equals the direct path on singleton grids") {
  PathRng rng(3131, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const GameModel m = linear_model(0.6 + rng.uniform(), -1.0 + 2.0 * rng.uniform(),
                                     -1.0 + 2.0 * rng.uniform(), 0.3 + rng.uniform(),
                                     rng.uniform(), rng.uniform(), rng.uniform());
    const Mesh mesh(Domain::interval(-1.0, 1.0), 1, 101);
    const SolveResult game = solve_isaacs(m, mesh);
    const SolveResult direct = solve_linear(m, mesh);
    CHECK((game.solution.values - direct.solution.values).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(game.iterations == 1);
  }
}

TEST_CASE("solver: direct solve refuses multi-control models") {
  const ModelBundle bundle = make_builtin("valley-game");
  CHECK_THROWS_AS(solve_linear(bundle.model, Mesh(bundle.domain, 1, 101)), InputError);
}

TEST_CASE("solver: mean-reverting model on a large box settles at f / c") {
  const GameModel m = ou_model(1.0, 1.0, 1.0, 1.0);
  const SolveResult r = solve_isaacs(m, Mesh(Domain::whole_space(6.0), 1, 301));
  CHECK((r.solution.values.array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("solver: whole-space boundary needs a positive discount") {
  const GameModel m = linear_model(std::numbers::sqrt2, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(solve_isaacs(m, Mesh(Domain::whole_space(2.0), 1, 51)), NumericalError);
}

TEST_CASE("lipschitz estimate: linear, constant, and square-root data") {
  const Mesh mesh(Domain::interval(-1.0, 1.0), 1, 99);
  GridFunction linear(mesh), flat(mesh), root(mesh);
  for (int i = 0; i <= mesh.n + 1; ++i) {
    linear(i) = mesh.coord(i);
    flat(i) = 4.2;
    root(i) = std::sqrt(std::abs(mesh.coord(i)));
  }
  CHECK(lipschitz_estimate(linear, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lipschitz_estimate(flat, -1.0, 1.0) == 0.0);
  // difference quotient at the origin grows like 1/sqrt(h)
  CHECK(lipschitz_estimate(root, -0.5, 0.5) ==
        doctest::Approx(1.0 / std::sqrt(mesh.h)).epsilon(1e-12));
  CHECK_THROWS_AS(lipschitz_estimate(linear, 0.0, 1e-6), InputError);
}

TEST_CASE("solver: discounted payoff bound holds") {
  const ModelBundle bundle = make_builtin("generic-1d");
  const SolveResult r = solve_isaacs(bundle.model, Mesh(Domain::whole_space(6.0), 1, 401));
  const double bound = 1.0 / 1.0 + 1.0;  // sup|f|/delta1 + sup|g|
  CHECK(r.solution.values.cwiseAbs().maxCoeff() <= bound + 1e-12);
}

TEST_CASE("solver: iteration count stays under the finite-policy bound") {
  const ModelBundle bundle = make_builtin("valley-game");
  const GameModel pen = build_penalized_model(bundle.model, *bundle.a2, 8.0);
  const Mesh mesh(bundle.domain, 1, 801);
  const SolveResult r = solve_isaacs(pen, mesh);
  CHECK(r.iterations <= pen.controls.n_a() * pen.controls.n_b() * mesh.n);
}

TEST_CASE("solver: comparison principle on monotone data") {
  PathRng rng(2222, 0);
  const Mesh mesh(Domain::interval(-1.0, 1.0), 1, 51);
  for (int trial = 0; trial < 10; ++trial) {
    const double s = 0.7 + 0.5 * rng.uniform();
    const double b = -1.0 + 2.0 * rng.uniform();
    const double c = 0.3 + rng.uniform();
    const double f = -1.0 + 2.0 * rng.uniform();
    const double lift_f = 0.5 * rng.uniform();
    const double lift_g = 0.5 * rng.uniform();
    GameModel low;
    low.dim = 1;
    low.noise_dim = 1;
    low.param_dim = 1;
    low.controls = {{"a0", "a1"}, {"b0", "b1"}, {}};
    low.sigma = [s](int ia, int, const Vec&, const Vec&) {
      return Mat(Mat::Constant(1, 1, s + 0.1 * ia));
    };
    low.drift = [b](int ia, int ib, const Vec&, const Vec& x) {
      return vec1(b * (ia ? 1.0 : -1.0) + 0.3 * std::sin(x(0) + ib));
    };
    low.c = [c](int, int ib, const Vec&, const Vec&) { return c + 0.2 * ib; };
    low.f = [f](int ia, int, const Vec&, const Vec& x) {
      return f + 0.4 * std::cos(2.0 * x(0) + ia);
    };
    low.g = [f](const Vec& x) { return 0.3 * f * x(0); };
    GameModel high = low;
    high.f = [low, lift_f](int ia, int ib, const Vec& p, const Vec& x) {
      return low.f(ia, ib, p, x) + lift_f;
    };
    high.g = [low, lift_g](const Vec& x) { return low.g(x) + lift_g; };
    const SolveResult v_low = solve_isaacs(low, mesh);
    const SolveResult v_high = solve_isaacs(high, mesh);
    CHECK((v_low.solution.values - v_high.solution.values).maxCoeff() <= 1e-9);
  }
}

TEST_CASE("solver 2d: harmonic coordinate data is exact") {
  GameModel m;
  m.dim = 2;
  m.noise_dim = 2;
  m.param_dim = 1;
  m.controls = {{"a0"}, {"b0"}, {}};
  m.sigma = [](int, int, const Vec&, const Vec&) {
    return Mat(std::numbers::sqrt2 * Mat::Identity(2, 2));
  };
  m.drift = [](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
  m.c = [](int, int, const Vec&, const Vec&) { return 0.0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 0.0; };
  m.g = [](const Vec& x) { return x(0); };
  const Mesh mesh(Domain::box(-1.0, 1.0), 2, 21);
  const SolveResult r = solve_isaacs(m, mesh);
  for (int i = 0; i <= mesh.n + 1; ++i)
    for (int j = 0; j <= mesh.n + 1; ++j)
      CHECK(r.solution(i, j) == doctest::Approx(mesh.coord(i)).epsilon(1e-11));
}

TEST_CASE("solver 2d: cross-derivative beyond diagonal dominance is refused") {
  GameModel m;
  m.dim = 2;
  m.noise_dim = 2;
  m.param_dim = 1;
  m.controls = {{"a0"}, {"b0"}, {}};
  // a = [[1, .45], [.45, .25]]: PSD but a12 > a22.
  m.sigma = [](int, int, const Vec&, const Vec&) {
    Mat s(2, 2);
    s << 1.4142135623730951, 0.0, 0.63639610306789274, 0.30822070014844881;
    return s;
  };
  m.drift = [](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.g = [](const Vec&) { return 0.0; };
  CHECK_THROWS_WITH_AS(solve_isaacs(m, Mesh(Domain::box(-1.0, 1.0), 2, 11)),
                       doctest::Contains("monotonicity violated"), NumericalError);
}

TEST_CASE("solver 2d: comparison on a genuinely mixed diffusion") {
  GameModel low;
  low.dim = 2;
  low.noise_dim = 2;
  low.param_dim = 1;
  low.controls = {{"a0", "a1"}, {"b0"}, {}};
  low.sigma = [](int, int, const Vec&, const Vec& x) {
    // a = [[1, q], [q, 1]] with |q| < 1: diagonally dominant
    const double q = 0.4 * std::sin(x(0) + x(1));
    Mat s(2, 2);
    const double l22 = std::sqrt(2.0 * (1.0 - q * q));
    s << std::numbers::sqrt2, 0.0, std::numbers::sqrt2 * q, l22;
    return s;
  };
  low.drift = [](int ia, int, const Vec&, const Vec&) {
    return Vec((ia ? 1.0 : -1.0) * vec2(0.5, -0.3));
  };
  low.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  low.f = [](int, int, const Vec&, const Vec& x) { return std::cos(x(0)) * std::sin(x(1)); };
  low.g = [](const Vec& x) { return 0.2 * x(0) * x(1); };
  GameModel high = low;
  high.f = [low](int ia, int ib, const Vec& p, const Vec& x) {
    return low.f(ia, ib, p, x) + 0.3;
  };
  const Mesh mesh(Domain::box(-1.0, 1.0), 2, 19);
  const SolveResult v_low = solve_isaacs(low, mesh);
  const SolveResult v_high = solve_isaacs(high, mesh);
  CHECK((v_low.solution.values - v_high.solution.values).maxCoeff() <= 1e-9);
}

TEST_CASE("interior probe: square-root boundary data stabilizes away from the edge") {
  GameModel m = constant_model(std::numbers::sqrt2, 0.0, 1.0, 0.0, 0.0);
  m.g = [](const Vec& x) { return std::sqrt(std::abs(1.0 - x(0))); };
  const SweepReport report = interior_lipschitz_probe(m, Domain::interval(-1.0, 1.0),
                                                      {101, 201, 401, 801}, -0.5, 0.5);
  CHECK(report.verdict == "bounded");

  // smooth data: the interior estimate cannot exceed the global one
  GameModel smooth = constant_model(std::numbers::sqrt2, 0.0, 1.0, 0.0, 0.0);
  smooth.g = [](const Vec& x) { return std::sin(2.0 * x(0)); };
  const Mesh mesh(Domain::interval(-1.0, 1.0), 1, 401);
  const SolveResult r = solve_isaacs(smooth, mesh);
  CHECK(lipschitz_estimate(r.solution, -0.5, 0.5) <=
        lipschitz_estimate(r.solution, -1.0, 1.0) + 1e-14);

  // region touching the boundary is rejected
  CHECK_THROWS_AS(interior_lipschitz_probe(m, Domain::interval(-1.0, 1.0), {101}, -0.99, 0.5),
                  InputError);
}

TEST_CASE("truncation control: mean-reverting model stabilizes under radius doubling") {
  const GameModel m = ou_model(1.0, 1.0, 1.0, 1.0);
  const SolveResult r = solve_with_truncation_check(m, 3.0, 151, -1.0, 1.0, 1e-8);
  CHECK(std::abs(r.solution.interpolate(vec1(0.0)) - 1.0) <= 1e-10);
}

TEST_CASE("zeroth-order balance: sup-inf root matches the single-pair ratio") {
  const GameModel m = constant_model(1.0, 0.0, 2.0, 3.0, 0.0);
  CHECK(zeroth_order_balance(m, vec1(0.0)) == doctest::Approx(1.5).epsilon(1e-12));
}
