#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isaacslab/types.hpp"

namespace isaacs {

enum class DomainKind { interval, box, whole_space };

// Computational domain.  Boxes are squares [left,right]^2; a whole-space
// problem is cut to [-truncation_radius, truncation_radius]^d before
// discretization.
struct Domain {
  DomainKind kind = DomainKind::interval;
  double left = -1.0;
  double right = 1.0;
  double truncation_radius = 0.0;

  void validate() const;

  // Bounds actually used by a mesh (truncation applied for whole space).
  double lo() const { return kind == DomainKind::whole_space ? -truncation_radius : left; }
  double hi() const { return kind == DomainKind::whole_space ? truncation_radius : right; }
  bool bounded() const { return kind != DomainKind::whole_space; }

  static Domain interval(double l, double r);
  static Domain box(double l, double r);
  static Domain whole_space(double truncation_radius);
};

// Uniform mesh with n interior nodes per axis; node 0 and node n+1 sit on
// the boundary, h = (hi-lo)/(n+1).
struct Mesh {
  Domain domain;
  int dim = 1;
  int n = 3;
  double h = 0.0;

  Mesh() = default;
  Mesh(const Domain& dom, int dim, int n_interior);

  int points_per_axis() const { return n + 2; }
  long total_points() const;
  double coord(int i) const { return domain.lo() + h * i; }  // i in [0, n+1]

  // Flattened index for 2D (row-major over (i, j)); 1D ignores j.
  long index(int i, int j = 0) const;
  bool is_boundary(int i, int j = 0) const;
  Vec point(long flat) const;
};

// Values of a scalar function on all mesh nodes (interior and boundary).
struct GridFunction {
  Mesh mesh;
  Eigen::VectorXd values;

  GridFunction() = default;
  explicit GridFunction(const Mesh& m) : mesh(m), values(Eigen::VectorXd::Zero(m.total_points())) {}

  double operator()(int i, int j = 0) const { return values(mesh.index(i, j)); }
  double& operator()(int i, int j = 0) { return values(mesh.index(i, j)); }

  // Piecewise-linear (bilinear in 2D) interpolation; clamps to the mesh box.
  double interpolate(const Vec& x) const;

  bool all_finite() const { return values.allFinite(); }
};

// Max over adjacent node pairs, both endpoints inside [lo, hi]^d, of
// |difference| / h.  Throws InputError if the region holds fewer than 2 nodes
// along every axis.
double lipschitz_estimate(const GridFunction& gf, double lo, double hi);

}  // namespace isaacs
