#include "perclab.h"

#include <cstring>
#include <fstream>
#include <string>

#include "perclab/clusters.hpp"
#include "perclab/errors.hpp"
#include "perclab/experiments.hpp"
#include "perclab/network.hpp"
#include "perclab/parallel.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
perclab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PERCLAB_OK;
  } catch (const perclab::ParameterError& e) {
    g_last_error = e.what();
    return PERCLAB_ERR_PARAMETER;
  } catch (const perclab::NumericError& e) {
    g_last_error = e.what();
    return PERCLAB_ERR_NUMERIC;
  } catch (const perclab::ResourceError& e) {
    g_last_error = e.what();
    return PERCLAB_ERR_RESOURCE;
  } catch (const perclab::IoError& e) {
    g_last_error = e.what();
    return PERCLAB_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PERCLAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PERCLAB_ERR_INTERNAL;
  }
}

perclab_status require(bool cond, const char* msg) {
  if (cond) return PERCLAB_OK;
  g_last_error = msg;
  return PERCLAB_ERR_PARAMETER;
}

}  // namespace

struct perclab_kernel {
  perclab::KernelSpec spec;
};
struct perclab_cloud {
  perclab::MarkedCloud cloud;
  bool marked = false;
};
struct perclab_graph {
  perclab::GeoGraph graph;
};
struct perclab_network {
  perclab::Network net;
};

extern "C" {

const char* perclab_version(void) { return perclab::kVersion; }

const char* perclab_last_error(void) { return g_last_error.c_str(); }

void perclab_string_free(char* s) { delete[] s; }

void perclab_request_interrupt(void) { perclab::interrupt_flag().store(true); }

/* ----------------------------------------------------------- kernels */

perclab_status perclab_kernel_bernoulli_nn(int dim, double p, perclab_kernel** out) {
  if (auto st = require(out != nullptr, "out is NULL")) return st;
  return guarded([&] {
    *out = new perclab_kernel{perclab::KernelSpec::bernoulli_nn(dim, p)};
  });
}

perclab_status perclab_kernel_long_range(int dim, double beta, double delta,
                                         perclab_kernel** out) {
  if (auto st = require(out != nullptr, "out is NULL")) return st;
  return guarded([&] {
    *out = new perclab_kernel{perclab::KernelSpec::long_range(dim, beta, delta)};
  });
}

perclab_status perclab_kernel_scale_free(int dim, double beta, double gamma, double delta,
                                         perclab_kernel** out) {
  if (auto st = require(out != nullptr, "out is NULL")) return st;
  return guarded([&] {
    *out = new perclab_kernel{perclab::KernelSpec::scale_free(dim, beta, gamma, delta)};
  });
}

perclab_status perclab_kernel_wdrcm(int dim, int g_kind, double gamma, double gamma2,
                                    int rho_kind, double beta, double delta,
                                    perclab_kernel** out) {
  if (auto st = require(out != nullptr, "out is NULL")) return st;
  if (auto st = require(g_kind >= 0 && g_kind <= 2, "g_kind must be 0, 1 or 2")) return st;
  if (auto st = require(rho_kind >= 0 && rho_kind <= 1, "rho_kind must be 0 or 1"))
    return st;
  return guarded([&] {
    *out = new perclab_kernel{perclab::KernelSpec::wdrcm(
        dim, static_cast<perclab::GKind>(g_kind), gamma, gamma2,
        static_cast<perclab::RhoKind>(rho_kind), beta, delta)};
  });
}

void perclab_kernel_free(perclab_kernel* k) { delete k; }

perclab_status perclab_kernel_phi(const perclab_kernel* k, double s, double t, double r,
                                  double* out) {
  if (auto st = require(k && out, "NULL argument")) return st;
  return guarded([&] { *out = k->spec.phi(s, t, r); });
}

perclab_status perclab_kernel_edge_prob(const perclab_kernel* k, double s, double t,
                                        double r, double* out) {
  if (auto st = require(k && out, "NULL argument")) return st;
  return guarded([&] { *out = k->spec.edge_prob(s, t, r); });
}

perclab_status perclab_kernel_mark_integral(const perclab_kernel* k, double r, double mu,
                                            double* out) {
  if (auto st = require(k && out, "NULL argument")) return st;
  return guarded([&] { *out = perclab::mark_integral(k->spec, r, mu); });
}

perclab_status perclab_kernel_delta_eff(const perclab_kernel* k, double mu, double r0,
                                        double ratio, int points, double* slope,
                                        double* residual) {
  if (auto st = require(k && slope, "NULL argument")) return st;
  return guarded([&] {
    auto est = perclab::estimate_delta_eff(k->spec, mu,
                                           perclab::geometric_grid(r0, ratio, points));
    *slope = est.slope;
    if (residual) *residual = est.residual;
  });
}

/* ------------------------------------------------------------ clouds */

perclab_status perclab_cloud_sample_poisson(int dim, double side, int torus,
                                            double intensity, uint64_t seed,
                                            perclab_cloud** out) {
  if (auto st = require(out != nullptr, "out is NULL")) return st;
  return guarded([&] {
    auto box = perclab::BoxDomain::cube(dim, side, torus != 0);
    auto* c = new perclab_cloud;
    c->cloud.base = perclab::sample_poisson(box, intensity, seed);
    *out = c;
  });
}

perclab_status perclab_cloud_sample_lattice(int dim, double side, int torus,
                                            double retention, uint64_t seed,
                                            perclab_cloud** out) {
  if (auto st = require(out != nullptr, "out is NULL")) return st;
  return guarded([&] {
    auto box = perclab::BoxDomain::cube(dim, side, torus != 0);
    auto* c = new perclab_cloud;
    c->cloud.base = perclab::sample_lattice(box, retention, seed);
    *out = c;
  });
}

void perclab_cloud_free(perclab_cloud* c) { delete c; }

perclab_status perclab_cloud_attach_marks(perclab_cloud* c, uint64_t seed) {
  if (auto st = require(c != nullptr, "cloud is NULL")) return st;
  return guarded([&] {
    c->cloud = perclab::attach_marks(std::move(c->cloud.base), seed);
    c->marked = true;
  });
}

perclab_status perclab_cloud_palm(perclab_cloud* c) {
  if (auto st = require(c != nullptr, "cloud is NULL")) return st;
  if (auto st = require(c->marked, "attach marks before palm conditioning")) return st;
  return guarded([&] { c->cloud = perclab::palm_condition(std::move(c->cloud)); });
}

perclab_status perclab_cloud_size(const perclab_cloud* c, size_t* out) {
  if (auto st = require(c && out, "NULL argument")) return st;
  *out = c->cloud.size();
  return PERCLAB_OK;
}

perclab_status perclab_cloud_vertex(const perclab_cloud* c, size_t index, double* coords,
                                    double* mark) {
  if (auto st = require(c && coords, "NULL argument")) return st;
  if (auto st = require(index < c->cloud.size(), "index out of range")) return st;
  auto pt = c->cloud.point(index);
  std::memcpy(coords, pt.data(), pt.size() * sizeof(double));
  if (mark) *mark = c->marked ? c->cloud.marks[index] : 0.0;
  return PERCLAB_OK;
}

perclab_status perclab_cloud_save_csv(const perclab_cloud* c, const char* path) {
  if (auto st = require(c && path, "NULL argument")) return st;
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw perclab::IoError(std::string("cannot open ") + path);
    const auto& mc = c->cloud;
    for (int i = 0; i < mc.dim(); ++i) out << "x" << (i + 1) << ",";
    out << "mark\n";
    for (size_t i = 0; i < mc.size(); ++i) {
      auto pt = mc.point(i);
      for (int j = 0; j < mc.dim(); ++j) out << pt[j] << ",";
      out << (c->marked ? mc.marks[i] : 0.0) << "\n";
    }
  });
}

/* ------------------------------------------------------------ graphs */

perclab_status perclab_graph_build(const perclab_cloud* c, const perclab_kernel* k,
                                   int method, double cell_side, uint64_t seed,
                                   perclab_graph** out) {
  if (auto st = require(c && k && out, "NULL argument")) return st;
  if (auto st = require(c->marked, "attach marks before building a graph")) return st;
  if (auto st = require(method == 0 || method == 1, "method must be 0 or 1")) return st;
  return guarded([&] {
    auto* g = new perclab_graph;
    g->graph = method == 1
                   ? perclab::build_graph_naive(c->cloud, k->spec, seed)
                   : perclab::build_graph_cells(c->cloud, k->spec, cell_side, seed);
    *out = g;
  });
}

void perclab_graph_free(perclab_graph* g) { delete g; }

perclab_status perclab_graph_num_vertices(const perclab_graph* g, size_t* out) {
  if (auto st = require(g && out, "NULL argument")) return st;
  *out = g->graph.num_vertices();
  return PERCLAB_OK;
}

perclab_status perclab_graph_num_edges(const perclab_graph* g, size_t* out) {
  if (auto st = require(g && out, "NULL argument")) return st;
  *out = g->graph.edges.size();
  return PERCLAB_OK;
}

perclab_status perclab_graph_edge(const perclab_graph* g, size_t index, uint32_t* a,
                                  uint32_t* b, double* length) {
  if (auto st = require(g && a && b, "NULL argument")) return st;
  if (auto st = require(index < g->graph.edges.size(), "index out of range")) return st;
  const auto& e = g->graph.edges[index];
  *a = e.a;
  *b = e.b;
  if (length) *length = e.length;
  return PERCLAB_OK;
}

perclab_status perclab_graph_bond_percolate(const perclab_graph* g, double p,
                                            uint64_t seed, perclab_graph** out) {
  if (auto st = require(g && out, "NULL argument")) return st;
  return guarded([&] { *out = new perclab_graph{perclab::bond_percolate(g->graph, p, seed)}; });
}

perclab_status perclab_graph_truncate(const perclab_graph* g, double ell,
                                      perclab_graph** out) {
  if (auto st = require(g && out, "NULL argument")) return st;
  return guarded([&] { *out = new perclab_graph{perclab::truncate(g->graph, ell)}; });
}

perclab_status perclab_graph_largest_component(const perclab_graph* g, size_t* out) {
  if (auto st = require(g && out, "NULL argument")) return st;
  return guarded([&] {
    *out = g->graph.num_vertices() ? perclab::components(g->graph).largest_size() : 0;
  });
}

perclab_status perclab_graph_save_csv(const perclab_graph* g, const char* path) {
  if (auto st = require(g && path, "NULL argument")) return st;
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw perclab::IoError(std::string("cannot open ") + path);
    out << "i,j,length\n";
    for (const auto& e : g->graph.edges)
      out << e.a << "," << e.b << "," << e.length << "\n";
  });
}

/* ---------------------------------------------------------- networks */

perclab_status perclab_network_from_graph(const perclab_graph* g, int conductance,
                                          perclab_network** out) {
  if (auto st = require(g && out, "NULL argument")) return st;
  if (auto st = require(conductance == 0 || conductance == 1, "conductance must be 0 or 1"))
    return st;
  return guarded([&] {
    *out = new perclab_network{perclab::from_graph(
        g->graph, conductance == 0 ? perclab::ConductanceKind::unit
                                   : perclab::ConductanceKind::inverse_length)};
  });
}

void perclab_network_free(perclab_network* n) { delete n; }

perclab_status perclab_network_effective_conductance(const perclab_network* net,
                                                     uint32_t v, int n, double* out) {
  if (auto st = require(net && out, "NULL argument")) return st;
  return guarded([&] { *out = perclab::effective_conductance(net->net, v, n); });
}

perclab_status perclab_network_transience_probe(const perclab_network* net, uint32_t v,
                                                const int* n_list, size_t count,
                                                double* values, size_t* n_used,
                                                int* plateau) {
  if (auto st = require(net && n_list && values, "NULL argument")) return st;
  return guarded([&] {
    std::vector<int> ns(n_list, n_list + count);
    auto curve = perclab::transience_probe(net->net, v, ns);
    for (size_t i = 0; i < curve.values.size(); ++i) values[i] = curve.values[i];
    if (n_used) *n_used = curve.values.size();
    if (plateau) *plateau = curve.plateau ? 1 : 0;
  });
}

/* ------------------------------------------------------- experiments */

perclab_status perclab_run_experiment_file(const char* config_path, const char* kind,
                                           const char* out_dir, uint64_t seed_override,
                                           int has_seed, int threads, int* exit_code) {
  if (auto st = require(config_path != nullptr, "config_path is NULL")) return st;
  return guarded([&] {
    auto cfg = perclab::Config::parse_file(config_path);
    perclab::RunOptions opts;
    opts.out_dir = out_dir ? out_dir : "";
    if (has_seed) opts.seed_override = seed_override;
    opts.threads = threads;
    auto result = perclab::run_experiment(cfg, kind ? kind : "", opts);
    if (exit_code) *exit_code = result.exit_code;
    if (result.exit_code != 0 && result.exit_code != 130)
      throw perclab::ParameterError(result.message);
  });
}

perclab_status perclab_validate_file(const char* config_path, char** report) {
  if (auto st = require(config_path && report, "NULL argument")) return st;
  return guarded([&] {
    auto cfg = perclab::Config::parse_file(config_path);
    auto problems = perclab::validate_config(cfg);
    std::string joined;
    for (const auto& p : problems) {
      joined += p;
      joined += "\n";
    }
    char* buf = new char[joined.size() + 1];
    std::memcpy(buf, joined.c_str(), joined.size() + 1);
    *report = buf;
  });
}

} /* extern "C" */
