#include <doctest.h>

#include <cmath>

#include "isaacslab/barrier.hpp"
#include "isaacslab/builtins.hpp"
#include "isaacslab/rng.hpp"
#include "isaacslab/solver.hpp"
#include "isaacslab/transport.hpp"

using namespace isaacs;

namespace {

GameModel two_by_two_model() {
  GameModel m;
  m.dim = 1;
  m.noise_dim = 1;
  m.param_dim = 1;
  m.controls.a_controls = {"a0", "a1"};
  m.controls.b_controls = {"b0", "b1"};
  m.sigma = [](int ia, int, const Vec&, const Vec&) {
    return Mat(Mat::Constant(1, 1, 1.0 + 0.5 * ia));
  };
  m.drift = [](int ia, int ib, const Vec&, const Vec&) { return vec1(ia - 0.5 * ib); };
  m.c = [](int, int ib, const Vec&, const Vec&) { return 1.0 + ib; };
  m.f = [](int ia, int ib, const Vec&, const Vec&) { return 0.25 * ia - 0.5 * ib; };
  m.g = [](const Vec&) { return 0.0; };
  return m;
}

}  // namespace

TEST_CASE("hamiltonian: zero coefficients give zero") {
  GameModel m = constant_model(0.0, 0.0, 0.0, 0.0, 0.0);
  const auto h = hamiltonian(m, m.zero_param(), vec1(0.3), 2.0, vec1(-1.0),
                             Mat(Mat::Constant(1, 1, 5.0)));
  CHECK(h.value == 0.0);
  CHECK(h.alpha == 0);
  CHECK(h.beta == 0);
}

TEST_CASE("hamiltonian: single pair is direct evaluation") {
  // a = 1, b = 0, c = 1, f = 0 at u = 3, d2u = 2: value 2*1 - 3*1 = -1
  GameModel m = constant_model(std::numbers::sqrt2, 0.0, 1.0, 0.0, 0.0);
  const auto h = hamiltonian(m, m.zero_param(), vec1(0.0), 3.0, vec1(0.0),
                             Mat(Mat::Constant(1, 1, 2.0)));
  CHECK(h.value == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("hamiltonian: unit-coefficient scaling-drift data balances at the origin") {
  // a = 1, drift x, c = 1, f = 0 at x = 0, u = 1, du = 0, d2u = 1: 1 - 1 = 0
  GameModel m = scaling_drift_model(1.0, 1.0);
  const auto h = hamiltonian(m, m.zero_param(), vec1(0.0), 1.0, vec1(0.0),
                             Mat(Mat::Constant(1, 1, 1.0)));
  CHECK(std::abs(h.value) <= 1e-15);
}

TEST_CASE("hamiltonian: empty control grid is a configuration error") {
  GameModel m = constant_model(1.0, 0.0, 1.0, 0.0, 0.0);
  m.controls.b_controls.clear();
  CHECK_THROWS_AS(hamiltonian(m, m.zero_param(), vec1(0.0), 0.0, vec1(0.0),
                              Mat(Mat::Zero(1, 1))),
                  ConfigError);
}

TEST_CASE("hamiltonian: asymmetric second-derivative argument is rejected") {
  GameModel m = constant_model(1.0, 0.0, 1.0, 0.0, 0.0);
  m.dim = 2;
  m.noise_dim = 2;
  m.sigma = [](int, int, const Vec&, const Vec&) { return Mat(Mat::Identity(2, 2)); };
  m.drift = [](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hamiltonian(m, m.zero_param(), vec2(0, 0), 0.0, Vec(Vec::Zero(2)), bad),
                  InputError);
}

TEST_CASE("hamiltonian: monotone in d2u and nonincreasing in u") {
  GameModel m = two_by_two_model();
  PathRng rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec x = vec1(-1.0 + 2.0 * rng.uniform());
    const double u = -1.0 + 2.0 * rng.uniform();
    const Vec du = vec1(-1.0 + 2.0 * rng.uniform());
    const Mat d2u = Mat::Constant(1, 1, -2.0 + 4.0 * rng.uniform());
    const Mat bump = Mat::Constant(1, 1, rng.uniform());  // PSD in 1D
    const double base = hamiltonian(m, m.zero_param(), x, u, du, d2u).value;
    CHECK(hamiltonian(m, m.zero_param(), x, u, du, Mat(d2u + bump)).value >= base - 1e-12);
    CHECK(hamiltonian(m, m.zero_param(), x, u + rng.uniform(), du, d2u).value <= base + 1e-12);
  }
}

TEST_CASE("hamiltonian: ties resolve to the first control in list order") {
  GameModel m = two_by_two_model();
  m.f = [](int, int, const Vec&, const Vec&) { return 0.0; };
  m.drift = [](int, int, const Vec&, const Vec&) { return vec1(0.0); };
  m.sigma = [](int, int, const Vec&, const Vec&) { return Mat(Mat::Constant(1, 1, 1.0)); };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  const auto h = hamiltonian(m, m.zero_param(), vec1(0.0), 0.0, vec1(0.0), Mat(Mat::Zero(1, 1)));
  CHECK(h.alpha == 0);
  CHECK(h.beta == 0);
}

TEST_CASE("hat coefficients: diagonal reproduces the base coefficients bitwise") {
  const ModelBundle bundle = make_builtin("remark-6-1-1");  // non-identity transport
  const Vec x = vec1(0.7);
  for (int ia : {0, 31, 200}) {
    const HatCoefficients hat = hat_coefficients(bundle.model, bundle.transport, ia, 0, x, x);
    CHECK(hat.sigma_hat(0, 0) == bundle.model.sigma_at(ia, 0, x)(0, 0));
    CHECK(hat.b_hat(0) == bundle.model.drift_at(ia, 0, x)(0));
    CHECK(hat.c_hat == bundle.model.c_at(ia, 0, x));
    CHECK(hat.f_hat == bundle.model.f_at(ia, 0, x));
  }
}

TEST_CASE("hat coefficients: rotation transport aligns sigma-hat with sigma(y)") {
  GameModel m;
  m.dim = 2;
  m.noise_dim = 2;
  m.param_dim = 1;
  m.controls = {{"a0"}, {"b0"}, {}};
  m.sigma = [](int, int, const Vec&, const Vec& x) {
    Mat rot(2, 2);
    const double t = x(0);
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return rot;
  };
  m.drift = [](int, int, const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 0.0; };
  m.g = [](const Vec&) { return 0.0; };

  const TransportStructure transport = rotation_transport(m);
  const Vec x = vec2(0.4, -0.2), y = vec2(-0.3, 0.9);
  const HatCoefficients hat = hat_coefficients(m, transport, 0, 0, x, y);
  CHECK((hat.sigma_hat - m.sigma_at(0, 0, y)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("hat coefficients: a-hat matches half sigma-hat sigma-hat*") {
  GameModel m;
  m.dim = 2;
  m.noise_dim = 2;
  m.param_dim = 2;
  m.controls = {{"a0"}, {"b0"}, {}};
  m.sigma = [](int, int, const Vec& p, const Vec& x) {
    Mat s(2, 2);
    s << 1.0 + 0.1 * std::sin(x(0)) + 0.05 * p(0), 0.2, -0.1, 0.8 + 0.1 * std::cos(x(1) + p(1));
    return s;
  };
  m.drift = [](int, int, const Vec& p, const Vec& x) { return Vec(0.5 * x + 0.1 * p); };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 0.5; };
  m.g = [](const Vec&) { return 0.0; };

  VectorField r_diff = [](int, int, const Vec& x) { return vec2(0.1 * x(0), -0.2); };
  MatrixField p_diff = [](int, int, const Vec& x) {
    Mat pd(2, 2);
    pd << 0.3, -0.1, 0.2 * x(1), 0.4;
    return pd;
  };
  ThetaField theta = [](int, int, const Vec&, const Vec& xi) {
    Mat th = Mat::Zero(2, 2);
    th(0, 1) = 0.7 * xi(0) - 0.2 * xi(1);
    th(1, 0) = -th(0, 1);
    return th;
  };
  const TransportStructure transport = differential_transport(m, r_diff, p_diff, theta);

  const Vec x = vec2(0.3, -0.5), y = vec2(0.1, -0.3);
  const HatCoefficients hat = hat_coefficients(m, transport, 0, 0, x, y);
  const Mat recomputed = 0.5 * (hat.sigma_hat * hat.sigma_hat.transpose());
  CHECK((recomputed - hat.a_hat).cwiseAbs().maxCoeff() <=
        1e-12 * (1.0 + hat.a_hat.cwiseAbs().maxCoeff()));

  // validate() covers the orthogonality and skew-symmetry invariants
  transport.validate(m, {x, y}, {vec2(0.05, -0.02), vec2(-0.01, 0.04)});
}

TEST_CASE("transport validation rejects a non-orthogonal P") {
  GameModel m = constant_model(1.0, 0.0, 1.0, 0.0, 0.0);
  TransportStructure t = identity_transport(1, 1);
  t.identity = false;
  t.P = [](int, int, const Vec& x, const Vec& y) {
    return Mat(Mat::Constant(1, 1, 1.0 + (x - y).norm()));
  };
  CHECK_THROWS_AS(t.validate(m, {vec1(0.0)}, {vec1(0.5)}), ConfigError);
}

TEST_CASE("barrier: unit-diffusion driftless model verifies at mu = 1") {
  GameModel m = constant_model(std::numbers::sqrt2, 0.0, 0.0, 0.0, 0.0);
  const BarrierSpec barrier = build_barrier(m, Domain::interval(-1.0, 1.0), 64.0);
  CHECK(barrier.mu == 1.0);
  CHECK(barrier.verified_margin <= -1.0 + 1e-12);

  // boundary value: psi(|x| = R) = 2
  CHECK(barrier.psi(vec1(1.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(barrier.psi(vec1(-1.0)) == doctest::Approx(2.0).epsilon(1e-14));

  // analytic derivatives against central differences
  const double h = 1e-5;
  for (double x : {-0.8, -0.3, 0.0, 0.45, 0.9}) {
    const double fd2 =
        (barrier.psi(vec1(x + h)) - 2.0 * barrier.psi(vec1(x)) + barrier.psi(vec1(x - h))) / (h * h);
    CHECK(barrier.hess(vec1(x))(0, 0) == doctest::Approx(fd2).epsilon(1e-5));
    const double fd1 = (barrier.psi(vec1(x + h)) - barrier.psi(vec1(x - h))) / (2.0 * h);
    CHECK(barrier.grad(vec1(x))(0) == doctest::Approx(fd1).epsilon(1e-8));
  }
}

TEST_CASE("barrier: psi stays >= 1 across the blend and tail") {
  const BarrierSpec barrier = BarrierSpec::make(4.0, 2.0);
  for (double rho = 0.0; rho < barrier.r_ball + 2.0; rho += 1e-3)
    CHECK(barrier.profile(rho) >= 1.0);
  CHECK(barrier.profile_d1(barrier.r_ball + barrier.blend_len) == 0.0);
  CHECK(barrier.profile_d2(barrier.r_ball + barrier.blend_len) == 0.0);
}

TEST_CASE("barrier: degenerate model admits no barrier") {
  GameModel m = constant_model(0.0, 0.0, 0.0, 0.0, 0.0);
  CHECK_THROWS_AS(build_barrier(m, Domain::interval(-1.0, 1.0), 1024.0), BarrierNotFound);
  try {
    build_barrier(m, Domain::interval(-1.0, 1.0), 1024.0);
  } catch (const BarrierNotFound& e) {
    CHECK(e.achieved_margin == doctest::Approx(0.0));  // L psi == 0 for the zero operator
  }
}

TEST_CASE("check transform: scaling at the gradient-free point and c two ways") {
  GameModel m = constant_model(std::numbers::sqrt2, 0.3, 0.5, 0.25, 1.0);
  m.delta1 = 0.5;
  const BarrierSpec barrier = build_barrier(m, Domain::interval(-1.0, 1.0), 64.0);
  const GameModel checked = check_transform(m, barrier);

  // At the origin the barrier gradient vanishes, so sigma, drift, and g pick
  // up plain powers of psi(0).
  const Vec origin = vec1(0.0);
  const double psi0 = barrier.psi(origin);
  CHECK(checked.sigma_at(0, 0, origin)(0, 0) ==
        doctest::Approx(std::sqrt(psi0) * m.sigma_at(0, 0, origin)(0, 0)).epsilon(1e-14));
  CHECK(checked.drift_at(0, 0, origin)(0) ==
        doctest::Approx(psi0 * m.drift_at(0, 0, origin)(0)).epsilon(1e-14));
  CHECK(checked.g(origin) == doctest::Approx(m.g(origin) / psi0).epsilon(1e-14));

  // Transformed discount, symbolic vs. finite-difference L psi: O(h^2) match.
  for (double x : {-0.6, 0.2, 0.8}) {
    const Vec xv = vec1(x);
    const double h = 1e-4;
    const double a = m.a_matrix_at(0, 0, xv)(0, 0);
    const double fd_lpsi =
        a * (barrier.psi(vec1(x + h)) - 2.0 * barrier.psi(xv) + barrier.psi(vec1(x - h))) / (h * h) +
        m.drift_at(0, 0, xv)(0) * (barrier.psi(vec1(x + h)) - barrier.psi(vec1(x - h))) / (2.0 * h) -
        m.c_at(0, 0, xv) * barrier.psi(xv);
    CHECK(checked.c_at(0, 0, xv) == doctest::Approx(-fd_lpsi).epsilon(1e-7));
  }
}

TEST_CASE("check transform: discount of the driftless unit-diffusion barrier is cosh") {
  GameModel m = constant_model(std::numbers::sqrt2, 0.0, 0.0, 0.0, 0.0);
  const BarrierSpec barrier = build_barrier(m, Domain::interval(-1.0, 1.0), 64.0);
  const GameModel checked = check_transform(m, barrier);
  for (double x : {-0.9, -0.4, 0.0, 0.3, 1.0}) {
    CHECK(checked.c_at(0, 0, vec1(x)) == doctest::Approx(std::cosh(x)).epsilon(1e-12));
    CHECK(checked.c_at(0, 0, vec1(x)) >= 1.0 - 1e-12);
  }
}

TEST_CASE("check transform: refuses an unverified barrier") {
  GameModel m = constant_model(std::numbers::sqrt2, 0.0, 0.0, 0.0, 0.0);
  BarrierSpec fake = BarrierSpec::make(1.0, 1.0);
  fake.verified_margin = -0.5;
  CHECK_THROWS_AS(check_transform(m, fake), NumericalError);
}

TEST_CASE("check transform: solved transformed problem matches psi-scaled solution") {
  GameModel m = constant_model(std::numbers::sqrt2, 0.0, 0.0, 2.0, 0.0);
  const Domain domain = Domain::interval(-1.0, 1.0);
  const BarrierSpec barrier = build_barrier(m, domain, 64.0);
  const GameModel checked = check_transform(m, barrier);

  const Mesh mesh(domain, 1, 401);
  const SolveResult v = solve_linear(m, mesh);
  const SolveResult w = solve_linear(checked, mesh);
  double err = 0.0;
  for (int i = 0; i <= mesh.n + 1; ++i)
    err = std::max(err, std::abs(w.solution(i) - v.solution(i) / barrier.psi(vec1(mesh.coord(i)))));
  CHECK(err <= 5e-3);  // first-order upwind discrepancy at this resolution
}
