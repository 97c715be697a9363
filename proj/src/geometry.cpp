#include "perclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perclab/errors.hpp"

namespace perclab {

BoxDomain BoxDomain::cube(int d, double side, bool torus) {
  BoxDomain b;
  b.dim = d;
  b.center.assign(static_cast<size_t>(d), 0.0);
  b.sides.assign(static_cast<size_t>(d), side);
  b.torus = torus;
  b.validate();
  return b;
}

BoxDomain BoxDomain::cube_at(std::span<const double> center, double side, bool torus) {
  BoxDomain b;
  b.dim = static_cast<int>(center.size());
  b.center.assign(center.begin(), center.end());
  b.sides.assign(center.size(), side);
  b.torus = torus;
  b.validate();
  return b;
}

void BoxDomain::validate() const {
  if (dim < 1) throw ParameterError("BoxDomain: dimension must be >= 1");
  if (center.size() != static_cast<size_t>(dim) || sides.size() != static_cast<size_t>(dim))
    throw ParameterError("BoxDomain: center/sides size must equal dim");
  for (double s : sides) {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw ParameterError("BoxDomain: side lengths must be finite and >= 0");
  }
}

bool BoxDomain::contains(std::span<const double> x) const {
  for (int i = 0; i < dim; ++i) {
    if (x[i] < lo(i) || x[i] >= hi(i)) return false;
  }
  return true;
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (double s : sides) v *= s;
  return v;
}

double BoxDomain::diameter() const {
  double d2 = 0.0;
  for (double s : sides) {
    double ext = torus ? 0.5 * s : s;
    d2 += ext * ext;
  }
  return std::sqrt(d2);
}

BoxDomain BoxDomain::inflated(double k) const {
  BoxDomain b = *this;
  for (double& s : b.sides) s += 2.0 * k;
  return b;
}

BoxDomain BoxDomain::clipped_to(const BoxDomain& outer) const {
  BoxDomain b = *this;
  for (int i = 0; i < dim; ++i) {
    double l = std::max(lo(i), outer.lo(i));
    double h = std::min(hi(i), outer.hi(i));
    if (h < l) h = l;
    b.center[i] = 0.5 * (l + h);
    b.sides[i] = h - l;
  }
  return b;
}

bool BoxDomain::inside(const BoxDomain& outer) const {
  for (int i = 0; i < dim; ++i) {
    if (lo(i) < outer.lo(i) - 1e-12 || hi(i) > outer.hi(i) + 1e-12) return false;
  }
  return true;
}

double domain_distance(const BoxDomain& dom, std::span<const double> a,
                       std::span<const double> b) {
  double d2 = 0.0;
  for (int i = 0; i < dom.dim; ++i) {
    double dx = std::fabs(a[i] - b[i]);
    if (dom.torus) {
      double L = dom.sides[i];
      if (dx > 0.5 * L) dx = L - dx;
    }
    d2 += dx * dx;
  }
  return std::sqrt(d2);
}

double boundary_distance(const BoxDomain& box, std::span<const double> x) {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < box.dim; ++i) {
    d = std::min(d, std::min(x[i] - box.lo(i), box.hi(i) - x[i]));
  }
  return std::max(0.0, d);
}

}  // namespace perclab
