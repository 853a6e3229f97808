#include "isaacslab/builtins.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

namespace isaacs {

namespace {

ControlGrid single_pair_grid() {
  ControlGrid g;
  g.a_controls = {"a0"};
  g.b_controls = {"b0"};
  return g;
}

GameModel scalar_model_base() {
  GameModel m;
  m.dim = 1;
  m.noise_dim = 1;
  m.param_dim = 1;
  m.controls = single_pair_grid();
  return m;
}

double smooth_bump_13(double x) {
  const double rho = std::abs(x);
  if (rho <= 1.0 || rho >= 3.0) return 0.0;
  return std::exp(-1.0 / ((rho - 1.0) * (3.0 - rho)));
}

}  // namespace

GameModel constant_model(double sigma, double drift, double c, double f, double g) {
  GameModel m = scalar_model_base();
  m.sigma = [sigma](int, int, const Vec&, const Vec&) { return Mat(Mat::Constant(1, 1, sigma)); };
  m.drift = [drift](int, int, const Vec&, const Vec&) { return vec1(drift); };
  m.c = [c](int, int, const Vec&, const Vec&) { return c; };
  m.f = [f](int, int, const Vec&, const Vec&) { return f; };
  m.g = [g](const Vec&) { return g; };
  m.k0 = std::max({std::abs(sigma), std::abs(drift), std::abs(c), std::abs(f), std::abs(g), 1.0});
  m.k1 = 0.0;
  m.delta0 = 0.5 * sigma * sigma;
  m.delta1 = c;
  return m;
}

GameModel linear_model(double sigma, double b0, double b1, double c, double f,
                       double g0, double g1) {
  GameModel m = scalar_model_base();
  m.sigma = [sigma](int, int, const Vec&, const Vec&) { return Mat(Mat::Constant(1, 1, sigma)); };
  m.drift = [b0, b1](int, int, const Vec&, const Vec& x) { return vec1(b0 + b1 * x(0)); };
  m.c = [c](int, int, const Vec&, const Vec&) { return c; };
  m.f = [f](int, int, const Vec&, const Vec&) { return f; };
  m.g = [g0, g1](const Vec& x) { return g0 + g1 * x(0); };
  m.k0 = std::max({std::abs(sigma), std::abs(b0) + 2.0 * std::abs(b1), std::abs(c), std::abs(f), 1.0});
  m.k1 = std::max({std::abs(b1), std::abs(g1), 1.0});
  m.delta0 = 0.5 * sigma * sigma;
  m.delta1 = c;
  return m;
}

GameModel ou_model(double sigma, double theta, double c, double f) {
  GameModel m = linear_model(sigma, 0.0, -theta, c, f, f / std::max(c, 1e-300), 0.0);
  m.k1 = std::max(theta, 1.0);
  return m;
}

GameModel scaling_drift_model(double delta0, double b_slope) {
  GameModel m = scalar_model_base();
  const double sigma = std::sqrt(2.0 * delta0);
  m.sigma = [sigma](int, int, const Vec&, const Vec&) { return Mat(Mat::Constant(1, 1, sigma)); };
  m.drift = [b_slope](int, int, const Vec&, const Vec& x) { return vec1(b_slope * x(0)); };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 0.0; };
  m.g = [](const Vec&) { return 1.0; };
  m.k0 = std::max(2.0 * std::abs(b_slope), 1.0);
  m.k1 = std::max(std::abs(b_slope), 1.0);
  m.delta0 = delta0;
  m.delta1 = 1.0;
  return m;
}

GameModel trig_model(double s0, double s1, double b0, double b1, double c, double f,
                     double sfreq) {
  GameModel m = scalar_model_base();
  m.sigma = [s0, s1, sfreq](int, int, const Vec&, const Vec& x) {
    return Mat(Mat::Constant(1, 1, s0 + s1 * std::sin(sfreq * x(0))));
  };
  m.drift = [b0, b1](int, int, const Vec&, const Vec& x) {
    return vec1(b1 * x(0) + b0 * std::cos(x(0)));
  };
  m.c = [c](int, int, const Vec&, const Vec&) { return c; };
  m.f = [f](int, int, const Vec&, const Vec&) { return f; };
  m.g = [f, c](const Vec&) { return f / std::max(c, 1e-300); };
  m.k0 = std::max({s0 + std::abs(s1), std::abs(b0), std::abs(c), std::abs(f), 1.0});
  m.k1 = std::max({std::abs(s1) * std::max(sfreq, 1.0), std::abs(b1) + std::abs(b0), 1.0});
  const double smin = s0 - std::abs(s1);
  m.delta0 = 0.5 * smin * smin;
  m.delta1 = c;
  return m;
}

ModelBundle bump_diffusion_bundle(int n_alpha, double c0, double eps, bool use_p_field) {
  ModelBundle bundle;
  bundle.name = use_p_field ? "remark-6-1-1" : "remark-6-1-1-r-only";
  GameModel m;
  m.dim = 1;
  m.noise_dim = 1;
  m.param_dim = 1;
  for (int k = 0; k < n_alpha; ++k) m.controls.a_controls.push_back("alpha" + std::to_string(k));
  m.controls.b_controls = {"b0"};
  const double two_pi = 2.0 * std::numbers::pi;
  auto alpha_of = [n_alpha, two_pi](int ia) { return two_pi * ia / n_alpha; };

  m.sigma = [](int, int, const Vec&, const Vec& x) {
    return Mat(Mat::Constant(1, 1, smooth_bump_13(x(0))));
  };
  m.drift = [alpha_of](int ia, int, const Vec& p, const Vec& x) {
    return vec1(std::tanh(x(0) + 2.0 * std::cos(alpha_of(ia) + p(0))));
  };
  m.c = [c0](int, int, const Vec&, const Vec&) { return c0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.g = [](const Vec&) { return 0.0; };
  m.k0 = 2.0;
  m.k1 = 2.0;
  m.delta0 = 0.0;  // degenerate outside (1, 3)
  m.delta1 = c0;

  VectorField r_field = [alpha_of, eps](int ia, int, const Vec& x) {
    const double u = x(0) + 2.0 * std::cos(alpha_of(ia));
    if (std::abs(u) <= eps) return vec1(0.0);
    return vec1(-2.0 / std::sinh(2.0 * u));
  };
  MatrixField p_field = [alpha_of, eps, use_p_field](int ia, int, const Vec& x) {
    if (!use_p_field) return Mat(Mat::Zero(1, 1));
    const double alpha = alpha_of(ia);
    const double u = x(0) + 2.0 * std::cos(alpha);
    if (std::abs(u) <= eps && std::abs(std::sin(alpha)) > eps)
      return Mat(Mat::Constant(1, 1, 0.5 / std::sin(alpha)));
    return Mat(Mat::Zero(1, 1));
  };
  ThetaField theta = [](int, int, const Vec&, const Vec&) { return Mat(Mat::Zero(1, 1)); };

  bundle.model = m;
  bundle.transport = differential_transport(bundle.model, r_field, p_field, theta);
  bundle.domain = Domain::whole_space(4.0);
  bundle.resolved.set("model.family", "remark-6-1-1");
  bundle.resolved.set("model.n_alpha", std::to_string(n_alpha));
  return bundle;
}

ModelBundle tanh_drift_bundle(double c0, double eps) {
  ModelBundle bundle;
  bundle.name = "tanh-drift";
  GameModel m;
  m.dim = 1;
  m.noise_dim = 1;
  m.param_dim = 1;
  m.controls.a_controls = {"plus", "minus"};
  m.controls.b_controls = {"b0"};
  auto sign_of = [](int ia) { return ia == 0 ? 1.0 : -1.0; };
  m.sigma = [](int, int, const Vec&, const Vec& x) {
    return Mat(Mat::Constant(1, 1, smooth_bump_13(x(0))));
  };
  m.drift = [sign_of](int ia, int, const Vec&, const Vec& x) {
    return vec1(std::tanh(x(0) + 2.0 * sign_of(ia)));
  };
  m.c = [c0](int, int, const Vec&, const Vec&) { return c0; };
  m.f = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.g = [](const Vec&) { return 0.0; };
  m.k0 = 2.0;
  m.k1 = 2.0;
  m.delta0 = 0.0;
  m.delta1 = c0;

  VectorField r_field = [sign_of, eps](int ia, int, const Vec& x) {
    const double u = x(0) + 2.0 * sign_of(ia);
    if (std::abs(u) <= eps) return vec1(0.0);
    return vec1(-2.0 / std::sinh(2.0 * u));
  };
  MatrixField p_field = [](int, int, const Vec&) { return Mat(Mat::Zero(1, 1)); };
  ThetaField theta = [](int, int, const Vec&, const Vec&) { return Mat(Mat::Zero(1, 1)); };

  bundle.model = m;
  bundle.transport = differential_transport(bundle.model, r_field, p_field, theta);
  bundle.domain = Domain::whole_space(4.0);
  return bundle;
}

ModelBundle valley_game_bundle(double depth, double width, double delta0, double boost_drift) {
  ModelBundle bundle;
  bundle.name = "valley-game";
  GameModel m;
  m.dim = 1;
  m.noise_dim = 1;
  m.param_dim = 1;
  m.controls.a_controls = {"left", "right"};
  m.controls.b_controls = {"soft", "hard"};
  const double sigma = std::sqrt(2.0 * delta0);
  auto valley = [depth, width](double x) { return -depth * std::exp(-(x / width) * (x / width)); };
  m.sigma = [sigma](int, int, const Vec&, const Vec&) { return Mat(Mat::Constant(1, 1, sigma)); };
  m.drift = [](int ia, int ib, const Vec&, const Vec&) {
    const double sa = ia == 0 ? -1.0 : 1.0;
    const double sb = ib == 0 ? -1.0 : 1.0;
    return vec1(sa * 1.0 + 0.2 * sb);
  };
  m.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  m.f = [valley](int, int, const Vec&, const Vec& x) { return valley(x(0)); };
  m.g = [](const Vec&) { return 0.0; };
  m.k0 = std::max({depth, boost_drift, 2.0});
  m.k1 = std::max(2.0 * depth / width, 1.0);
  m.delta0 = delta0;
  m.delta1 = 1.0;

  A2Extension boost;
  boost.labels = {"boost"};
  boost.sigma = [](int, int, const Vec&, const Vec&) {
    return Mat(Mat::Constant(1, 1, std::numbers::sqrt2));
  };
  boost.drift = [boost_drift](int, int, const Vec&, const Vec&) { return vec1(boost_drift); };
  boost.c = [](int, int, const Vec&, const Vec&) { return 1.0; };
  boost.f = [valley](int, int, const Vec&, const Vec& x) { return valley(x(0)); };

  bundle.model = m;
  bundle.a2 = boost;
  bundle.transport = identity_transport(1, 1);
  bundle.domain = Domain::whole_space(4.0);
  return bundle;
}

std::vector<std::string> family_names() {
  return {"constant", "linear", "ou", "tanh-drift", "example-5-30-1", "remark-6-1-1",
          "trig", "valley-game"};
}

std::vector<std::string> builtin_names() {
  return {"ou-unit", "generic-1d", "winding-sigma-1d", "representation-1d",
          "example-5-30-1-b05", "example-5-30-1-b2", "valley-game", "remark-6-1-1",
          "tanh-drift"};
}

ModelBundle make_builtin(const std::string& name) {
  ModelBundle bundle;
  if (name == "ou-unit") {
    bundle.name = name;
    bundle.model = ou_model(1.0, 1.0, 1.0, 1.0);
    bundle.domain = Domain::whole_space(6.0);
    bundle.transport = identity_transport(1, 1);
    return bundle;
  }
  if (name == "generic-1d") {
    bundle.name = name;
    bundle.model = trig_model(1.0, 0.1, 0.3, -1.0, 1.0, 1.0);
    bundle.domain = Domain::whole_space(6.0);
    bundle.transport = identity_transport(1, 1);
    return bundle;
  }
  if (name == "winding-sigma-1d") {
    // Two noise channels winding around a circle: a = s^2/2 and |sigma'| = ks
    // are both constant, and the drift is linear, so the coupled difference
    // is geometric up to curvature terms.  The parameters sit close to the
    // balance point where the exit-decay functional scales linearly in the
    // initial offset.
    bundle.name = name;
    GameModel m = scalar_model_base();
    m.noise_dim = 2;
    const double s = std::sqrt(0.08), k = 6.0, b1 = 0.46, c0 = 0.5;
    m.sigma = [s, k](int, int, const Vec&, const Vec& x) {
      Mat sig(1, 2);
      sig << s * std::cos(k * x(0)), s * std::sin(k * x(0));
      return sig;
    };
    m.drift = [b1](int, int, const Vec&, const Vec& x) { return vec1(b1 * x(0)); };
    m.c = [c0](int, int, const Vec&, const Vec&) { return c0; };
    m.f = [](int, int, const Vec&, const Vec&) { return 1.0; };
    m.g = [c0](const Vec&) { return 1.0 / c0; };
    m.k0 = 2.0;
    m.k1 = s * k;
    m.delta0 = 0.5 * s * s;
    m.delta1 = c0;
    bundle.model = m;
    bundle.domain = Domain::whole_space(6.0);
    bundle.transport = identity_transport(2, 1);
    return bundle;
  }
  if (name == "representation-1d") {
    bundle.name = name;
    GameModel m = ou_model(1.0, 1.0, 1.0, 1.0);
    m.f = [](int, int, const Vec&, const Vec& x) { return std::cos(x(0)); };
    m.g = [](const Vec&) { return 0.0; };
    bundle.model = m;
    bundle.domain = Domain::whole_space(5.0);
    bundle.transport = identity_transport(1, 1);
    return bundle;
  }
  if (name == "example-5-30-1-b05" || name == "example-5-30-1-b2") {
    bundle.name = name;
    const double b = name.back() == '5' ? 0.5 : 2.0;
    bundle.model = scaling_drift_model(1e-3, b);
    bundle.domain = Domain::interval(-1.0, 1.0);
    bundle.transport = identity_transport(1, 1);
    return bundle;
  }
  if (name == "valley-game") return valley_game_bundle(1.0, 0.25, 1e-6, 3.0);
  if (name == "remark-6-1-1") return bump_diffusion_bundle(256, 0.1, 0.05, true);
  if (name == "tanh-drift") return tanh_drift_bundle(1.2, 0.05);

  std::ostringstream os;
  os << "unknown model '" << name << "'; available built-ins:";
  for (const auto& b : builtin_names()) os << " " << b;
  throw ConfigError(os.str());
}

ModelBundle model_from_config(const KvConfig& cfg) {
  const std::string family = cfg.get_string("model.family");
  ModelBundle bundle;
  if (family == "constant") {
    bundle.model = constant_model(cfg.get_double("model.sigma", 1.0), cfg.get_double("model.drift", 0.0),
                                  cfg.get_double("model.c", 1.0), cfg.get_double("model.f", 0.0),
                                  cfg.get_double("model.g", 0.0));
  } else if (family == "linear") {
    bundle.model = linear_model(cfg.get_double("model.sigma", 1.0), cfg.get_double("model.drift0", 0.0),
                                cfg.get_double("model.drift1", 0.0), cfg.get_double("model.c", 1.0),
                                cfg.get_double("model.f", 0.0), cfg.get_double("model.g0", 0.0),
                                cfg.get_double("model.g1", 0.0));
  } else if (family == "ou") {
    bundle.model = ou_model(cfg.get_double("model.sigma", 1.0), cfg.get_double("model.theta", 1.0),
                            cfg.get_double("model.c", 1.0), cfg.get_double("model.f", 1.0));
  } else if (family == "trig") {
    bundle.model = trig_model(cfg.get_double("model.s0", 1.0), cfg.get_double("model.s1", 0.1),
                              cfg.get_double("model.b0", 0.3), cfg.get_double("model.b1", -1.0),
                              cfg.get_double("model.c", 1.0), cfg.get_double("model.f", 1.0),
                              cfg.get_double("model.sfreq", 1.0));
  } else if (family == "example-5-30-1") {
    bundle.model = scaling_drift_model(cfg.get_double("model.delta0", 1e-3),
                                       cfg.get_double("model.b", 0.5));
  } else if (family == "remark-6-1-1") {
    ModelBundle b = bump_diffusion_bundle(static_cast<int>(cfg.get_int("model.n_alpha", 256)),
                                          cfg.get_double("model.c0", 0.1),
                                          cfg.get_double("model.eps", 0.05),
                                          cfg.get_int("model.p_field", 1) != 0);
    bundle.model = b.model;
    bundle.transport = b.transport;
    bundle.a2 = b.a2;
  } else if (family == "tanh-drift") {
    ModelBundle b = tanh_drift_bundle(cfg.get_double("model.c0", 1.2), cfg.get_double("model.eps", 0.05));
    bundle.model = b.model;
    bundle.transport = b.transport;
  } else if (family == "valley-game") {
    ModelBundle b = valley_game_bundle(cfg.get_double("model.depth", 1.0),
                                       cfg.get_double("model.width", 0.25),
                                       cfg.get_double("model.delta0", 1e-6),
                                       cfg.get_double("model.boost", 3.0));
    bundle.model = b.model;
    bundle.transport = b.transport;
    bundle.a2 = b.a2;
  } else {
    std::ostringstream os;
    os << "unknown model family '" << family << "'; available:";
    for (const auto& f : family_names()) os << " " << f;
    throw ConfigError(os.str());
  }
  bundle.name = cfg.get_string("model.name", family);

  const std::string kind = cfg.get_string("domain.kind", "whole-space");
  if (kind == "interval")
    bundle.domain = Domain::interval(cfg.get_double("domain.left", -1.0), cfg.get_double("domain.right", 1.0));
  else if (kind == "box")
    bundle.domain = Domain::box(cfg.get_double("domain.left", -1.0), cfg.get_double("domain.right", 1.0));
  else if (kind == "whole-space")
    bundle.domain = Domain::whole_space(cfg.get_double("domain.radius", 4.0));
  else
    throw ConfigError("config: domain.kind must be interval, box, or whole-space");

  if (!bundle.transport.r) bundle.transport = identity_transport(bundle.model.noise_dim, bundle.model.param_dim);
  const std::string tkind = cfg.get_string("transport.kind", "");
  if (tkind == "identity")
    bundle.transport = identity_transport(bundle.model.noise_dim, bundle.model.param_dim);
  else if (tkind == "rotation")
    bundle.transport = rotation_transport(bundle.model);
  else if (!tkind.empty() && tkind != "default")
    throw ConfigError("config: transport.kind must be identity, rotation, or default");

  bundle.resolved = cfg;
  return bundle;
}

ModelBundle load_model(const std::string& ref) {
  if (std::filesystem::exists(ref)) return model_from_config(KvConfig::parse_file(ref));
  return make_builtin(ref);
}

}  // namespace isaacs
