#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isaacslab/game_model.hpp"
#include "isaacslab/kv_config.hpp"
#include "isaacslab/mesh.hpp"
#include "isaacslab/penalization.hpp"
#include "isaacslab/transport.hpp"

namespace isaacs {

// A model together with its domain, transport, and (when the model carries a
// penalization extension) the auxiliary controls.
struct ModelBundle {
  std::string name;
  GameModel model;
  Domain domain;
  TransportStructure transport;
  std::optional<A2Extension> a2;
  KvConfig resolved;  // the parameters the bundle was built from
};

// Coefficient families addressable from configuration files.
std::vector<std::string> family_names();

// Named ready-to-run builtin instances.
std::vector<std::string> builtin_names();

// Builds from a named builtin or, when 'ref' is an existing file, from its
// configuration.  Unknown names raise ConfigError listing the builtins.
ModelBundle load_model(const std::string& ref);
ModelBundle make_builtin(const std::string& name);
ModelBundle model_from_config(const KvConfig& cfg);

// Family constructors used directly by tests and scenarios. ------------------

// Single-control model with constant coefficients.
GameModel constant_model(double sigma, double drift, double c, double f, double g);

// Single-control model, drift b0 + b1 x, linear terminal payoff g0 + g1 x.
GameModel linear_model(double sigma, double b0, double b1, double c, double f,
                       double g0, double g1);

// Ornstein-Uhlenbeck-type: constant sigma, drift -theta x, constant c and f.
GameModel ou_model(double sigma, double theta, double c, double f);

// 1D degenerate-limit family: a = delta0, drift b_slope * x, c = 1, f = 0,
// g = 1 (the value degenerates to |x|^(1/b_slope) as delta0 -> 0).
GameModel scaling_drift_model(double delta0, double b_slope);

// sigma = s0 + s1 sin(sfreq x), drift = b1 x + b0 cos x, constant c and f.
GameModel trig_model(double s0, double s1, double b0, double b1, double c, double f,
                     double sfreq = 1.0);

// Controlled bump-diffusion: sigma is a smooth bump supported on 1 < |x| < 3,
// drift tanh(x + 2 cos(alpha + p)) over a circle of alpha-controls, constant
// c.  With use_p_field the transport carries both compensating fields; with
// it off only the r field.  eps is the indicator width.
ModelBundle bump_diffusion_bundle(int n_alpha, double c0, double eps, bool use_p_field);

// Two-label variant with drift tanh(x + 2 alpha), alpha in {+1, -1}, and the
// r-field transport only.
ModelBundle tanh_drift_bundle(double c0, double eps);

// Penalization test game: drift-sign maximizer against a payoff valley, with
// one strong-drift auxiliary control carrying unit diffusion.
ModelBundle valley_game_bundle(double depth, double width, double delta0, double boost_drift);

}  // namespace isaacs
