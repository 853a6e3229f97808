#pragma once

#include <limits>
#include <vector>

#include "isaacslab/game_model.hpp"
#include "isaacslab/mesh.hpp"
#include "isaacslab/rng.hpp"
#include "isaacslab/transport.hpp"

namespace isaacs {

// Which drift correction couples the shifted process to the base one:
//   quadratic:  b_hat(x,y) - 2 mu a(x) (x - y)
//   martingale: b_hat(x,y) - sigma_hat(x,y) pi(x,y)
// The two coincide under the identity transport with the canonical pi.
enum class DriftCoupling { quadratic, martingale };

// Source of the weight direction pi driving z and rho:
//   canonical:       mu sigma*(x) (x - y)
//   transport_field: the transport's pi evaluator
//   zero:            pi == 0
enum class PiChoice { canonical, transport_field, zero };

struct MCConfig {
  double dt = 1e-3;
  double horizon = 15.0;
  long n_paths = 10000;
  std::uint64_t base_seed = 1;

  double epsilon = 0.01;  // initial offset
  Vec xi;                 // unit offset direction (defaults to e1)
  double lambda = 0.1;    // coupling-stop radius
  double big_m = 4.0;     // weight corridor (1/M, M)
  double mu = 1.0;        // coupling strength, >= 1
  double delta = 1.0;     // decay-rate parameter, >= 2 delta1
  double delta1 = 0.5;    // discount floor
  double eps0 = 0.1;      // separation ceiling for the condition check

  DriftCoupling drift_form = DriftCoupling::quadratic;
  PiChoice pi_choice = PiChoice::canonical;

  Vec start;        // base starting point y(0); x(0) = start + epsilon xi
  double z0 = 1.0;  // initial exponential weight, in (1/M, M)
  int alpha = 0;
  int beta = 0;

  // Half-width of the sampling box around start used by condition checks and
  // the lambda1 calibration.
  double check_halfwidth = 2.0;

  void validate(int dim) const;
  Vec unit_xi(int dim) const;
};

// One simulated coupled trajectory on shared Brownian increments.
struct PathRecord {
  std::vector<double> times;
  std::vector<Vec> x_eps, x_0;
  std::vector<Vec> xi_eps;  // (x_eps - x_0) / epsilon, zero when epsilon == 0
  std::vector<double> phi;      // integral of c along x_0
  std::vector<double> phi_hat;  // integral of c_hat along (x_eps, x_0)
  std::vector<double> rho;      // weight with discount correction
  std::vector<double> z;        // exponential-martingale weight
  double kappa_time = std::numeric_limits<double>::infinity();
  double gamma_time = std::numeric_limits<double>::infinity();
  double tau_time = std::numeric_limits<double>::infinity();
};

// Shared-increment Euler stepping of the coupled pair together with the phi
// integrals and the exponential weights (updated in log space so positivity
// is exact).  Stopping times are detected at the first grid time crossing.
class CoupledStepper {
 public:
  CoupledStepper(const GameModel& model, const TransportStructure& transport,
                 const MCConfig& cfg, const Domain* domain = nullptr);

  struct State {
    double t = 0.0;
    Vec x, y;
    double log_z = 0.0, log_rho = 0.0;
    double phi = 0.0, phi_hat = 0.0;
    double kappa_time = std::numeric_limits<double>::infinity();
    double gamma_time = std::numeric_limits<double>::infinity();
    double tau_time = std::numeric_limits<double>::infinity();
    long step = 0;

    double rho() const { return std::exp(log_rho); }
    bool kappa_fired() const { return kappa_time < std::numeric_limits<double>::infinity(); }
    bool gamma_fired() const { return gamma_time < std::numeric_limits<double>::infinity(); }
    bool tau_fired() const { return tau_time < std::numeric_limits<double>::infinity(); }
  };

  State initial() const;
  void step(State& s, PathRng& rng) const;
  // (x - y) / epsilon with the 0/0 := 0 convention.
  Vec scaled_difference(const State& s) const;
  double z_value(const State& s) const { return cfg_.z0 * std::exp(s.log_z); }

  const MCConfig& config() const { return cfg_; }

 private:
  Vec pi_value(const Vec& x, const Vec& y) const;
  void detect_stops(State& s) const;

  const GameModel& model_;
  const TransportStructure& transport_;
  MCConfig cfg_;
  const Domain* domain_;
  int d_, d1_;
};

PathRecord simulate_coupled_pair(const GameModel& model, const TransportStructure& transport,
                                 const MCConfig& cfg, long path_index,
                                 const Domain* domain = nullptr);

}  // namespace isaacs
