#pragma once

#include <span>
#include <vector>

namespace perclab {

/// Axis-aligned half-open box [lo, hi) per axis, optionally with periodic
/// (torus) boundary. Side lengths may be zero (degenerate, empty volume).
struct BoxDomain {
  int dim = 1;
  std::vector<double> center;  // size dim
  std::vector<double> sides;   // size dim, >= 0
  bool torus = false;

  static BoxDomain cube(int d, double side, bool torus = false);
  static BoxDomain cube_at(std::span<const double> center, double side,
                           bool torus = false);

  void validate() const;

  double lo(int axis) const { return center[axis] - 0.5 * sides[axis]; }
  double hi(int axis) const { return center[axis] + 0.5 * sides[axis]; }
  bool contains(std::span<const double> x) const;
  double volume() const;
  /// Largest distance between two points of the box (torus-aware).
  double diameter() const;

  /// The k-neighbourhood: the box grown by k in every direction (L-inf).
  BoxDomain inflated(double k) const;
  /// Intersection with `outer` (centers re-derived); used to clip grown boxes.
  BoxDomain clipped_to(const BoxDomain& outer) const;
  bool inside(const BoxDomain& outer) const;
};

/// Euclidean distance, wrapping coordinates when the domain is a torus.
double domain_distance(const BoxDomain& dom, std::span<const double> a,
                       std::span<const double> b);

/// L-inf distance from x to the boundary of the box (0 outside).
double boundary_distance(const BoxDomain& box, std::span<const double> x);

}  // namespace perclab
