#include "isaacslab/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace isaacs {

void Domain::validate() const {
  if (kind == DomainKind::whole_space) {
    if (!(truncation_radius > 0.0))
      throw ConfigError("domain: whole-space requires truncation_radius > 0");
  } else {
    if (!(left < right)) throw ConfigError("domain: requires left < right");
  }
}

Domain Domain::interval(double l, double r) {
  Domain d;
  d.kind = DomainKind::interval;
  d.left = l;
  d.right = r;
  d.validate();
  return d;
}

Domain Domain::box(double l, double r) {
  Domain d = interval(l, r);
  d.kind = DomainKind::box;
  return d;
}

Domain Domain::whole_space(double truncation_radius) {
  Domain d;
  d.kind = DomainKind::whole_space;
  d.truncation_radius = truncation_radius;
  d.left = -truncation_radius;
  d.right = truncation_radius;
  d.validate();
  return d;
}

Mesh::Mesh(const Domain& dom, int dimension, int n_interior) : domain(dom), dim(dimension), n(n_interior) {
  domain.validate();
  if (n < 3) throw ConfigError("mesh: need at least 3 interior nodes per axis");
  if (dim != 1 && dim != 2) throw ConfigError("mesh: dim must be 1 or 2");
  h = (domain.hi() - domain.lo()) / (n + 1);
}

long Mesh::total_points() const {
  const long m = points_per_axis();
  return dim == 1 ? m : m * m;
}

long Mesh::index(int i, int j) const {
  return dim == 1 ? i : static_cast<long>(i) * points_per_axis() + j;
}

bool Mesh::is_boundary(int i, int j) const {
  if (i == 0 || i == n + 1) return true;
  return dim == 2 && (j == 0 || j == n + 1);
}

Vec Mesh::point(long flat) const {
  if (dim == 1) return vec1(coord(static_cast<int>(flat)));
  const int m = points_per_axis();
  return vec2(coord(static_cast<int>(flat / m)), coord(static_cast<int>(flat % m)));
}

double GridFunction::interpolate(const Vec& x) const {
  const double lo = mesh.domain.lo();
  const int last = mesh.n + 1;
  auto locate = [&](double xi, int& i0, double& w) {
    double s = (xi - lo) / mesh.h;
    s = std::clamp(s, 0.0, static_cast<double>(last));
    i0 = std::min(static_cast<int>(s), last - 1);
    w = s - i0;
  };
  int i0;
  double wi;
  locate(x(0), i0, wi);
  if (mesh.dim == 1) return (1.0 - wi) * (*this)(i0) + wi * (*this)(i0 + 1);
  int j0;
  double wj;
  locate(x(1), j0, wj);
  return (1.0 - wi) * ((1.0 - wj) * (*this)(i0, j0) + wj * (*this)(i0, j0 + 1)) +
         wi * ((1.0 - wj) * (*this)(i0 + 1, j0) + wj * (*this)(i0 + 1, j0 + 1));
}

double lipschitz_estimate(const GridFunction& gf, double lo, double hi) {
  const Mesh& mesh = gf.mesh;
  auto in_region = [&](int i) {
    const double x = mesh.coord(i);
    return x >= lo - 1e-12 && x <= hi + 1e-12;
  };
  int count = 0;
  for (int i = 0; i <= mesh.n + 1; ++i)
    if (in_region(i)) ++count;
  if (count < 2) throw InputError("lipschitz_estimate: region contains fewer than 2 nodes");

  double best = 0.0;
  if (mesh.dim == 1) {
    for (int i = 0; i <= mesh.n; ++i)
      if (in_region(i) && in_region(i + 1))
        best = std::max(best, std::abs(gf(i + 1) - gf(i)) / mesh.h);
    return best;
  }
  for (int i = 0; i <= mesh.n + 1; ++i) {
    for (int j = 0; j <= mesh.n + 1; ++j) {
      if (!in_region(i) || !in_region(j)) continue;
      if (i <= mesh.n && in_region(i + 1))
        best = std::max(best, std::abs(gf(i + 1, j) - gf(i, j)) / mesh.h);
      if (j <= mesh.n && in_region(j + 1))
        best = std::max(best, std::abs(gf(i, j + 1) - gf(i, j)) / mesh.h);
    }
  }
  return best;
}

}  // namespace isaacs
