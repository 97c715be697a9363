#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "perclab/geometry.hpp"

namespace perclab {

enum class PointSource { poisson, lattice };

/// A simple point set on a box. Locations are stored flat (n x dim).
/// Sampling is keyed per unit cell / lattice site, so clouds sampled with
/// the same seed agree on the intersection of nested boxes.
struct PointCloud {
  BoxDomain domain;
  PointSource source = PointSource::poisson;
  double source_param = 1.0;  // intensity (poisson) or retention (lattice)
  std::uint64_t seed = 0;
  std::vector<double> coords;

  std::size_t size() const {
    return domain.dim > 0 ? coords.size() / static_cast<std::size_t>(domain.dim) : 0;
  }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(domain.dim),
            static_cast<std::size_t>(domain.dim)};
  }
};

/// Vertices: locations plus i.i.d. Uniform(0,1) marks. Marks are keyed by
/// the location bits, not by index, so extending the box leaves existing
/// marks untouched. `palm` is set when an origin vertex was forced in.
struct MarkedCloud {
  PointCloud base;
  std::vector<double> marks;
  std::uint64_t mark_seed = 0;
  bool palm = false;

  std::size_t size() const { return base.size(); }
  int dim() const { return base.domain.dim; }
  std::span<const double> point(std::size_t i) const { return base.point(i); }
};

/// Homogeneous Poisson process of the given intensity on the box.
PointCloud sample_poisson(const BoxDomain& domain, double intensity, std::uint64_t seed);

/// Bernoulli(retention) percolation of the integer lattice sites in the box.
PointCloud sample_lattice(const BoxDomain& domain, double retention, std::uint64_t seed);

/// Attach i.i.d. Uniform(0,1) marks, independent of locations.
MarkedCloud attach_marks(PointCloud cloud, std::uint64_t seed);

/// Palm conditioning: force a vertex at the origin with a fresh mark.
/// Poisson: Slivnyak insertion; lattice: the origin site is forced present.
/// The origin vertex is placed at index 0.
MarkedCloud palm_condition(MarkedCloud cloud);

}  // namespace perclab
