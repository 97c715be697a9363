#pragma once

#include <cstdint>

#include "perclab/graph.hpp"
#include "perclab/kernels.hpp"
#include "perclab/point_process.hpp"

namespace perclab {

enum class BuilderMethod { naive, cells };

/// A complete percolation model: point source, kernel, and how to sample
/// the edge set. One replica = one (cloud, marks, graph) triple derived
/// from a single replica seed.
struct ModelSpec {
  int dim = 2;
  bool torus = false;
  PointSource source = PointSource::poisson;
  double source_param = 1.0;  // intensity or retention
  KernelSpec kernel;
  BuilderMethod builder = BuilderMethod::cells;
  double cell_side = 0.0;  // <= 0: automatic

  /// Sample the marked cloud on the centred box of side `side`.
  MarkedCloud sample_cloud(double side, std::uint64_t seed, bool palm) const;

  /// Sample cloud and edges.
  GeoGraph sample_graph(double side, std::uint64_t seed, bool palm) const;
};

}  // namespace perclab
