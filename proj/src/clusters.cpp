#include "perclab/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>

#include "perclab/errors.hpp"
#include "perclab/parallel.hpp"
#include "perclab/rng.hpp"

namespace perclab {

// ---------------------------------------------------------------- parallel

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERCLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  pool.reserve(static_cast<size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::atomic<bool>& interrupt_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

// ------------------------------------------------------------------- model

MarkedCloud ModelSpec::sample_cloud(double side, std::uint64_t seed, bool palm) const {
  BoxDomain box = BoxDomain::cube(dim, side, torus);
  PointCloud pc = source == PointSource::poisson ? sample_poisson(box, source_param, seed)
                                                 : sample_lattice(box, source_param, seed);
  MarkedCloud mc = attach_marks(std::move(pc), seed);
  if (palm) mc = palm_condition(std::move(mc));
  return mc;
}

GeoGraph ModelSpec::sample_graph(double side, std::uint64_t seed, bool palm) const {
  MarkedCloud mc = sample_cloud(side, seed, palm);
  return builder == BuilderMethod::naive ? build_graph_naive(mc, kernel, seed)
                                         : build_graph_cells(mc, kernel, cell_side, seed);
}

// --------------------------------------------------------------- partition

Partition::Partition(std::size_t n)
    : parent_(n), size_(n, 1), num_components_(n) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
}

std::uint32_t Partition::find(std::uint32_t v) const {
  std::uint32_t root = v;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[v] != root) {
    std::uint32_t next = parent_[v];
    parent_[v] = root;
    v = next;
  }
  return root;
}

void Partition::unite(std::uint32_t a, std::uint32_t b) {
  std::uint32_t ra = find(a), rb = find(b);
  if (ra == rb) return;
  if (size_[ra] < size_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  --num_components_;
}

std::size_t Partition::component_size(std::uint32_t v) const { return size_[find(v)]; }

std::size_t Partition::largest_size() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (find(static_cast<std::uint32_t>(i)) == i) best = std::max<std::size_t>(best, size_[i]);
  }
  return best;
}

std::vector<std::vector<std::uint32_t>> Partition::component_lists() const {
  std::vector<std::vector<std::uint32_t>> lists;
  std::vector<std::uint32_t> slot(parent_.size(), 0);
  std::vector<bool> seen(parent_.size(), false);
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    std::uint32_t r = find(static_cast<std::uint32_t>(i));
    if (!seen[r]) {
      seen[r] = true;
      slot[r] = static_cast<std::uint32_t>(lists.size());
      lists.emplace_back();
    }
    lists[slot[r]].push_back(static_cast<std::uint32_t>(i));
  }
  return lists;
}

Partition components(const GeoGraph& graph) {
  Partition part(graph.num_vertices());
  for (const GeoEdge& e : graph.edges) part.unite(e.a, e.b);
  return part;
}

std::size_t largest_component_size(const GeoGraph& graph, const BoxDomain& box) {
  GeoGraph sub = induced_subgraph(graph, box);
  if (sub.num_vertices() == 0) return 0;
  return components(sub).largest_size();
}

// ------------------------------------------------------------- preclusters

std::vector<std::vector<std::uint32_t>> preclusters(const GeoGraph& graph,
                                                    const BoxDomain& cube, double k,
                                                    bool* clipped) {
  if (k < 0.0) throw ParameterError("preclusters: reach k must be >= 0");
  const BoxDomain& dom = graph.vertices.base.domain;
  BoxDomain reach = cube.inflated(k);
  bool was_clipped = !reach.inside(dom);
  if (was_clipped) reach = reach.clipped_to(dom);
  if (clipped) *clipped = was_clipped;

  const std::size_t n = graph.num_vertices();
  std::vector<bool> in_reach(n, false), in_cube(n, false);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    auto pt = graph.vertices.point(i);
    if (reach.contains(pt)) {
      in_reach[i] = true;
      any = true;
      if (cube.contains(pt)) in_cube[i] = true;
    }
  }
  if (!any) return {};

  Partition part(n);
  for (const GeoEdge& e : graph.edges)
    if (in_reach[e.a] && in_reach[e.b]) part.unite(e.a, e.b);

  // group cube vertices by their component in the reach graph
  std::vector<std::uint32_t> roots;
  std::vector<std::vector<std::uint32_t>> sets;
  std::vector<std::uint32_t> slot(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_cube[i]) continue;
    std::uint32_t r = part.find(static_cast<std::uint32_t>(i));
    if (!seen[r]) {
      seen[r] = true;
      slot[r] = static_cast<std::uint32_t>(sets.size());
      sets.emplace_back();
    }
    sets[slot[r]].push_back(static_cast<std::uint32_t>(i));
  }
  return sets;
}

std::vector<std::uint32_t> maximal_precluster(const GeoGraph& graph, const BoxDomain& cube,
                                              double k) {
  auto sets = preclusters(graph, cube, k);
  if (sets.empty()) return {};
  auto min_mark = [&](const std::vector<std::uint32_t>& s) {
    double m = 2.0;
    for (std::uint32_t v : s) m = std::min(m, graph.vertices.marks[v]);
    return m;
  };
  std::size_t best = 0;
  double best_mark = min_mark(sets[0]);
  bool degenerate_tie = false;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    double m = min_mark(sets[i]);
    if (sets[i].size() > sets[best].size() ||
        (sets[i].size() == sets[best].size() && m < best_mark)) {
      best = i;
      best_mark = m;
      degenerate_tie = false;
    } else if (sets[i].size() == sets[best].size() && m == best_mark) {
      degenerate_tie = true;
    }
  }
  if (degenerate_tie) return {};
  return sets[best];
}

// --------------------------------------------------------------- estimators

double freq_ci_half(double value, long replicas) {
  if (replicas <= 0) return 0.0;
  return 1.959963984540054 * std::sqrt(value * (1.0 - value) / static_cast<double>(replicas));
}

namespace {

bool origin_reaches_boundary(const GeoGraph& graph, double k_reach) {
  if (graph.num_vertices() == 0) return false;
  const BoxDomain& box = graph.vertices.base.domain;
  Partition part = components(graph);
  std::uint32_t oroot = part.find(0);  // palm origin sits at index 0
  for (std::size_t i = 0; i < graph.num_vertices(); ++i) {
    if (part.find(static_cast<std::uint32_t>(i)) != oroot) continue;
    if (boundary_distance(box, graph.vertices.point(i)) <= k_reach) return true;
  }
  return false;
}

}  // namespace

ThetaEstimate estimate_theta(const ModelSpec& model, double p, double n, double k_reach,
                             long replicas, std::uint64_t seed, ThetaEstimator kind,
                             int threads) {
  if (replicas < 1) throw ParameterError("estimate_theta: replicas must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("estimate_theta: p must be in [0,1]");

  std::vector<char> hits(static_cast<size_t>(replicas), 0);
  parallel_for(static_cast<size_t>(replicas), threads, [&](std::size_t r) {
    std::uint64_t rseed = derive_seed(seed, r);
    GeoGraph g = model.sample_graph(n, rseed, /*palm=*/true);
    if (p < 1.0) g = bond_percolate(g, p, rseed);
    bool hit = false;
    if (g.num_vertices() > 0) {
      if (kind == ThetaEstimator::origin_to_boundary) {
        hit = origin_reaches_boundary(g, k_reach);
      } else {
        Partition part = components(g);
        hit = part.component_size(0) == part.largest_size();
      }
    }
    hits[r] = hit ? 1 : 0;
  });

  long count = 0;
  for (char h : hits) count += h;
  ThetaEstimate est;
  est.kind = kind;
  est.p = p;
  est.n = n;
  est.replicas = replicas;
  est.value = static_cast<double>(count) / static_cast<double>(replicas);
  est.ci_half = freq_ci_half(est.value, replicas);
  return est;
}

FreqEstimate sublinear_cluster_prob(const ModelSpec& model, double lambda, double n,
                                    long replicas, std::uint64_t seed, int threads) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParameterError("sublinear_cluster_prob: lambda must be in (0,1)");
  if (replicas < 1) throw ParameterError("sublinear_cluster_prob: replicas must be >= 1");

  const double threshold = std::pow(n, lambda * model.dim);
  std::vector<char> hits(static_cast<size_t>(replicas), 0);
  parallel_for(static_cast<size_t>(replicas), threads, [&](std::size_t r) {
    std::uint64_t rseed = derive_seed(seed, r);
    GeoGraph g = model.sample_graph(n, rseed, /*palm=*/false);
    std::size_t biggest = g.num_vertices() ? components(g).largest_size() : 0;
    hits[r] = static_cast<double>(biggest) > threshold ? 1 : 0;
  });

  long count = 0;
  for (char h : hits) count += h;
  FreqEstimate est;
  est.replicas = replicas;
  est.value = static_cast<double>(count) / static_cast<double>(replicas);
  est.ci_half = freq_ci_half(est.value, replicas);
  return est;
}

}  // namespace perclab
