#include "isaacslab/coupled_sde.hpp"

#include <cmath>
#include <sstream>

namespace isaacs {

void MCConfig::validate(int dim) const {
  if (!(dt > 0.0)) throw InputError("mc config: dt must be positive");
  if (!(horizon >= dt)) throw InputError("mc config: horizon shorter than one step");
  if (n_paths < 1) throw InputError("mc config: need at least one path");
  if (!(big_m > 1.0)) throw InputError("mc config: corridor bound M must exceed 1");
  if (!(lambda > 0.0)) throw InputError("mc config: lambda must be positive");
  if (epsilon < 0.0) throw InputError("mc config: epsilon must be nonnegative");
  if (mu < 1.0) throw InputError("mc config: mu must be >= 1");
  if (delta < 2.0 * delta1 - 1e-12) throw InputError("mc config: delta must be >= 2 delta1");
  if (!(z0 > 1.0 / big_m && z0 < big_m))
    throw InputError("mc config: z0 must lie inside the corridor (1/M, M)");
  if (xi.size() != 0 && xi.size() != dim)
    throw InputError("mc config: xi dimension mismatch");
  if (xi.size() == dim && std::abs(xi.norm() - 1.0) > 1e-10)
    throw InputError("mc config: xi must be a unit vector");
  if (start.size() != 0 && start.size() != dim)
    throw InputError("mc config: start dimension mismatch");
}

Vec MCConfig::unit_xi(int dim) const {
  if (xi.size() == dim) return xi;
  Vec e = Vec::Zero(dim);
  e(0) = 1.0;
  return e;
}

CoupledStepper::CoupledStepper(const GameModel& model, const TransportStructure& transport,
                               const MCConfig& cfg, const Domain* domain)
    : model_(model), transport_(transport), cfg_(cfg), domain_(domain),
      d_(model.dim), d1_(model.noise_dim) {
  cfg_.validate(d_);
  if (cfg_.start.size() != d_) cfg_.start = Vec::Zero(d_);
}

CoupledStepper::State CoupledStepper::initial() const {
  State s;
  s.y = cfg_.start;
  s.x = cfg_.start + cfg_.epsilon * cfg_.unit_xi(d_);
  detect_stops(s);
  return s;
}

Vec CoupledStepper::pi_value(const Vec& x, const Vec& y) const {
  switch (cfg_.pi_choice) {
    case PiChoice::canonical: {
      const Mat s = model_.sigma_at(cfg_.alpha, cfg_.beta, x);
      return Vec(cfg_.mu * (s.transpose() * (x - y)));
    }
    case PiChoice::transport_field:
      return transport_.pi(cfg_.alpha, cfg_.beta, x, y);
    case PiChoice::zero:
      return Vec(Vec::Zero(d1_));
  }
  return Vec(Vec::Zero(d1_));
}

void CoupledStepper::detect_stops(State& s) const {
  if (!s.kappa_fired() && (s.x - s.y).norm() >= cfg_.lambda) s.kappa_time = s.t;
  const double rho = std::exp(s.log_rho);
  if (!s.gamma_fired() && (rho <= 1.0 / cfg_.big_m || rho >= cfg_.big_m)) s.gamma_time = s.t;
  if (!s.tau_fired()) {
    bool exited = false;
    const double z = z_value(s);
    if (z <= 1.0 / cfg_.big_m || z >= cfg_.big_m) exited = true;
    if (domain_ && domain_->bounded()) {
      for (int i = 0; i < d_; ++i)
        if (s.x(i) <= domain_->lo() || s.x(i) >= domain_->hi()) exited = true;
    }
    if (exited) s.tau_time = s.t;
  }
}

void CoupledStepper::step(State& s, PathRng& rng) const {
  const int a = cfg_.alpha, b = cfg_.beta;
  const double dt = cfg_.dt;

  const Mat sigma_y = model_.sigma_at(a, b, s.y);
  const Vec b_y = model_.drift_at(a, b, s.y);
  const double c_y = model_.c_at(a, b, s.y);

  const HatCoefficients hat = hat_coefficients(model_, transport_, a, b, s.x, s.y);
  const Vec pi = pi_value(s.x, s.y);

  Vec drift_x = hat.b_hat;
  if (cfg_.drift_form == DriftCoupling::quadratic) {
    const Mat a_x = model_.a_matrix_at(a, b, s.x);
    drift_x -= 2.0 * cfg_.mu * (a_x * (s.x - s.y));
  } else {
    drift_x -= hat.sigma_hat * pi;
  }

  Vec dw(d1_);
  rng.fill_normals(dw);
  dw *= std::sqrt(dt);

  const double pi_dw = pi.dot(dw);
  const double pi_sq = pi.squaredNorm();

  s.x += hat.sigma_hat * dw + drift_x * dt;
  s.y += sigma_y * dw + b_y * dt;
  // Exponential updates keep z and rho positive exactly; the pairing with the
  // left-point phi integrals makes z e^{-phi_hat} == rho e^{-phi} hold to
  // round-off at every grid time.
  s.log_z += pi_dw - 0.5 * pi_sq * dt;
  s.log_rho += pi_dw + (c_y - hat.c_hat - 0.5 * pi_sq) * dt;
  s.phi += c_y * dt;
  s.phi_hat += hat.c_hat * dt;
  s.t += dt;
  s.step += 1;

  if (!s.x.allFinite() || !s.y.allFinite() || !std::isfinite(s.log_z) || !std::isfinite(s.log_rho)) {
    std::ostringstream os;
    os << "coupled simulation: non-finite state at step " << s.step;
    throw NumericalError(os.str());
  }
  detect_stops(s);
}

Vec CoupledStepper::scaled_difference(const State& s) const {
  if (cfg_.epsilon == 0.0) return Vec(Vec::Zero(d_));  // 0/0 := 0
  return Vec((s.x - s.y) / cfg_.epsilon);
}

PathRecord simulate_coupled_pair(const GameModel& model, const TransportStructure& transport,
                                 const MCConfig& cfg, long path_index, const Domain* domain) {
  CoupledStepper stepper(model, transport, cfg, domain);
  PathRng rng(cfg.base_seed, static_cast<std::uint64_t>(path_index));
  CoupledStepper::State s = stepper.initial();

  PathRecord record;
  const long n_steps = static_cast<long>(std::llround(cfg.horizon / cfg.dt));
  record.times.reserve(n_steps + 1);
  auto push = [&]() {
    record.times.push_back(s.t);
    record.x_eps.push_back(s.x);
    record.x_0.push_back(s.y);
    record.xi_eps.push_back(stepper.scaled_difference(s));
    record.phi.push_back(s.phi);
    record.phi_hat.push_back(s.phi_hat);
    record.rho.push_back(std::exp(s.log_rho));
    record.z.push_back(stepper.z_value(s));
  };
  push();
  for (long k = 0; k < n_steps; ++k) {
    stepper.step(s, rng);
    push();
  }
  record.kappa_time = s.kappa_time;
  record.gamma_time = s.gamma_time;
  record.tau_time = s.tau_time;
  return record;
}

}  // namespace isaacs
