#include "perclab/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "perclab/errors.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

// Zigzag map so negative cell indices hash distinctly.
inline std::uint64_t zigzag(long long v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Iterate the integer grid boxes [i, i+1) that intersect [lo, hi).
struct CellRange {
  long long first, last;  // inclusive
};

CellRange cell_range(double lo, double hi) {
  CellRange r;
  r.first = static_cast<long long>(std::floor(lo));
  r.last = static_cast<long long>(std::ceil(hi)) - 1;
  if (hi <= lo) r.last = r.first - 1;  // empty
  return r;
}

}  // namespace

PointCloud sample_poisson(const BoxDomain& domain, double intensity, std::uint64_t seed) {
  domain.validate();
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw ParameterError("sample_poisson: intensity must be positive");

  PointCloud cloud;
  cloud.domain = domain;
  cloud.source = PointSource::poisson;
  cloud.source_param = intensity;
  cloud.seed = seed;

  const int d = domain.dim;
  if (domain.volume() == 0.0) return cloud;

  std::vector<CellRange> ranges(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) ranges[i] = cell_range(domain.lo(i), domain.hi(i));

  // Walk the unit-cell grid in row-major order; each cell has its own
  // stream keyed by its integer coordinates, independent of the box.
  std::vector<long long> idx(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    idx[i] = ranges[i].first;
    if (ranges[i].last < ranges[i].first) return cloud;
  }
  std::vector<std::uint64_t> words(static_cast<size_t>(d));
  std::vector<double> pt(static_cast<size_t>(d));
  for (;;) {
    for (int i = 0; i < d; ++i) words[i] = zigzag(idx[i]);
    RngStream rng(seed, make_stream_id(StreamPurpose::poisson_cell,
                                       std::span<const std::uint64_t>(words)));
    std::uint64_t count = rng.poisson(intensity);
    for (std::uint64_t k = 0; k < count; ++k) {
      for (int i = 0; i < d; ++i) pt[i] = static_cast<double>(idx[i]) + rng.uniform();
      if (domain.contains(pt)) cloud.coords.insert(cloud.coords.end(), pt.begin(), pt.end());
    }
    // advance the multi-index
    int axis = d - 1;
    while (axis >= 0) {
      if (++idx[axis] <= ranges[axis].last) break;
      idx[axis] = ranges[axis].first;
      --axis;
    }
    if (axis < 0) break;
  }
  return cloud;
}

PointCloud sample_lattice(const BoxDomain& domain, double retention, std::uint64_t seed) {
  domain.validate();
  if (!(retention >= 0.0 && retention <= 1.0))
    throw ParameterError("sample_lattice: retention must be in [0,1]");

  PointCloud cloud;
  cloud.domain = domain;
  cloud.source = PointSource::lattice;
  cloud.source_param = retention;
  cloud.seed = seed;

  const int d = domain.dim;
  std::vector<CellRange> ranges(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    // integer sites in [lo, hi)
    CellRange r;
    r.first = static_cast<long long>(std::ceil(domain.lo(i)));
    r.last = static_cast<long long>(std::ceil(domain.hi(i))) - 1;
    if (static_cast<double>(r.last) >= domain.hi(i)) --r.last;
    ranges[i] = r;
    if (r.last < r.first) return cloud;
  }

  std::vector<long long> idx(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) idx[i] = ranges[i].first;
  std::vector<std::uint64_t> words(static_cast<size_t>(d));
  for (;;) {
    bool keep = retention >= 1.0;
    if (!keep && retention > 0.0) {
      for (int i = 0; i < d; ++i) words[i] = zigzag(idx[i]);
      RngStream rng(seed, make_stream_id(StreamPurpose::lattice_site,
                                         std::span<const std::uint64_t>(words)));
      keep = rng.uniform() <= retention;
    }
    if (keep) {
      for (int i = 0; i < d; ++i) cloud.coords.push_back(static_cast<double>(idx[i]));
    }
    int axis = d - 1;
    while (axis >= 0) {
      if (++idx[axis] <= ranges[axis].last) break;
      idx[axis] = ranges[axis].first;
      --axis;
    }
    if (axis < 0) break;
  }
  return cloud;
}

MarkedCloud attach_marks(PointCloud cloud, std::uint64_t seed) {
  MarkedCloud mc;
  mc.mark_seed = seed;
  mc.marks.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    RngStream rng(seed, stream_for_point(StreamPurpose::vertex_mark, cloud.point(i)));
    mc.marks[i] = rng.uniform();
  }
  mc.base = std::move(cloud);
  return mc;
}

MarkedCloud palm_condition(MarkedCloud cloud) {
  const int d = cloud.dim();
  std::vector<double> origin(static_cast<size_t>(d), 0.0);
  if (!cloud.base.domain.contains(origin))
    throw ParameterError("palm_condition: origin is outside the domain");

  RngStream rng(cloud.mark_seed, stream_for_point(StreamPurpose::palm_mark, origin));
  const double fresh_mark = rng.uniform();

  // Drop an existing vertex exactly at the origin (lattice site), then
  // prepend the origin vertex so it sits at index 0.
  std::size_t n = cloud.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto p = cloud.point(i);
    bool at_origin = true;
    for (int j = 0; j < d; ++j)
      if (p[j] != 0.0) {
        at_origin = false;
        break;
      }
    if (at_origin) {
      cloud.base.coords.erase(cloud.base.coords.begin() + static_cast<long>(i) * d,
                              cloud.base.coords.begin() + static_cast<long>(i + 1) * d);
      cloud.marks.erase(cloud.marks.begin() + static_cast<long>(i));
      break;
    }
  }
  cloud.base.coords.insert(cloud.base.coords.begin(), origin.begin(), origin.end());
  cloud.marks.insert(cloud.marks.begin(), fresh_mark);
  cloud.palm = true;
  return cloud;
}

}  // namespace perclab
