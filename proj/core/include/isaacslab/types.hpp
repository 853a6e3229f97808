#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

namespace isaacs {

// Spatial, noise, and external-parameter dimensions are all tiny (d <= 2,
// d1 >= d, small k).  Fixed-capacity Eigen types keep evaluator calls off the
// heap, which matters in the Monte Carlo stepping loop.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Coefficient evaluators.  Controls are passed as indices into the model's
// control grid; p is the external parameter vector, x the spatial point.
using MatrixEvaluator = std::function<Mat(int a, int b, const Vec& p, const Vec& x)>;
using VectorEvaluator = std::function<Vec(int a, int b, const Vec& p, const Vec& x)>;
using ScalarEvaluator = std::function<double(int a, int b, const Vec& p, const Vec& x)>;
using TerminalEvaluator = std::function<double(const Vec& x)>;

// Transport-side evaluators take a point pair (x, y) instead of (p, x).
using PairMatrixEvaluator = std::function<Mat(int a, int b, const Vec& x, const Vec& y)>;
using PairVectorEvaluator = std::function<Vec(int a, int b, const Vec& x, const Vec& y)>;
using PairScalarEvaluator = std::function<double(int a, int b, const Vec& x, const Vec& y)>;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline Vec zero_vec(int n) { return Vec::Zero(n); }

inline Vec vec1(double x) {
  Vec v(1);
  v(0) = x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v(0) = x;
  v(1) = y;
  return v;
}

}  // namespace isaacs
