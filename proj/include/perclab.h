/*
 * perclab — C API for the inhomogeneous long-range percolation toolkit.
 *
 * All functions return perclab_status; PERCLAB_OK is 0. On failure a
 * thread-local message is available via perclab_last_error(). Objects are
 * opaque handles released with the matching _free function. Strings
 * returned through char** are heap-allocated; release them with
 * perclab_string_free.
 */
#ifndef PERCLAB_H
#define PERCLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum perclab_status {
  PERCLAB_OK = 0,
  PERCLAB_ERR_PARAMETER = 1, /* invalid arguments / precondition violated */
  PERCLAB_ERR_NUMERIC = 2,   /* solver or estimator failure */
  PERCLAB_ERR_RESOURCE = 3,  /* retry or iteration budget exhausted */
  PERCLAB_ERR_IO = 4,        /* file system / parse failure */
  PERCLAB_ERR_INTERNAL = 5
} perclab_status;

const char* perclab_version(void);
/* Message for the last failure on this thread (empty string if none). */
const char* perclab_last_error(void);
void perclab_string_free(char* s);
/* Ask running experiments to stop at the next safe point (signal-safe). */
void perclab_request_interrupt(void);

/* ----------------------------------------------------------- kernels */

typedef struct perclab_kernel perclab_kernel;

perclab_status perclab_kernel_bernoulli_nn(int dim, double p, perclab_kernel** out);
perclab_status perclab_kernel_long_range(int dim, double beta, double delta,
                                         perclab_kernel** out);
perclab_status perclab_kernel_scale_free(int dim, double beta, double gamma,
                                         double delta, perclab_kernel** out);
/* g_kind: 0 product, 1 min_max, 2 max; rho_kind: 0 pareto_capped, 1 unit_capped */
perclab_status perclab_kernel_wdrcm(int dim, int g_kind, double gamma, double gamma2,
                                    int rho_kind, double beta, double delta,
                                    perclab_kernel** out);
void perclab_kernel_free(perclab_kernel* k);

perclab_status perclab_kernel_phi(const perclab_kernel* k, double s, double t, double r,
                                  double* out);
perclab_status perclab_kernel_edge_prob(const perclab_kernel* k, double s, double t,
                                        double r, double* out);
/* Integral of phi over [r^{d(mu-1)}, 1-r^{d(mu-1)}]^2. */
perclab_status perclab_kernel_mark_integral(const perclab_kernel* k, double r, double mu,
                                            double* out);
/* Slope fit of the effective decay exponent on a geometric r grid. */
perclab_status perclab_kernel_delta_eff(const perclab_kernel* k, double mu, double r0,
                                        double ratio, int points, double* slope,
                                        double* residual);

/* ------------------------------------------------------------ clouds */

typedef struct perclab_cloud perclab_cloud;

/* Centred box of the given side per axis; boundary 0 = free, 1 = torus. */
perclab_status perclab_cloud_sample_poisson(int dim, double side, int torus,
                                            double intensity, uint64_t seed,
                                            perclab_cloud** out);
perclab_status perclab_cloud_sample_lattice(int dim, double side, int torus,
                                            double retention, uint64_t seed,
                                            perclab_cloud** out);
void perclab_cloud_free(perclab_cloud* c);

perclab_status perclab_cloud_attach_marks(perclab_cloud* c, uint64_t seed);
perclab_status perclab_cloud_palm(perclab_cloud* c);
perclab_status perclab_cloud_size(const perclab_cloud* c, size_t* out);
/* coords must hold dim doubles; mark may be NULL for unmarked clouds. */
perclab_status perclab_cloud_vertex(const perclab_cloud* c, size_t index, double* coords,
                                    double* mark);
/* One CSV row per vertex: x1,...,xd,mark. */
perclab_status perclab_cloud_save_csv(const perclab_cloud* c, const char* path);

/* ------------------------------------------------------------ graphs */

typedef struct perclab_graph perclab_graph;

/* method: 0 cells (cell_side <= 0 is automatic), 1 naive. */
perclab_status perclab_graph_build(const perclab_cloud* c, const perclab_kernel* k,
                                   int method, double cell_side, uint64_t seed,
                                   perclab_graph** out);
void perclab_graph_free(perclab_graph* g);

perclab_status perclab_graph_num_vertices(const perclab_graph* g, size_t* out);
perclab_status perclab_graph_num_edges(const perclab_graph* g, size_t* out);
perclab_status perclab_graph_edge(const perclab_graph* g, size_t index, uint32_t* a,
                                  uint32_t* b, double* length);
perclab_status perclab_graph_bond_percolate(const perclab_graph* g, double p,
                                            uint64_t seed, perclab_graph** out);
perclab_status perclab_graph_truncate(const perclab_graph* g, double ell,
                                      perclab_graph** out);
perclab_status perclab_graph_largest_component(const perclab_graph* g, size_t* out);
/* Edge list CSV: i,j,length. */
perclab_status perclab_graph_save_csv(const perclab_graph* g, const char* path);

/* ---------------------------------------------------------- networks */

typedef struct perclab_network perclab_network;

/* conductance: 0 unit, 1 inverse edge length. */
perclab_status perclab_network_from_graph(const perclab_graph* g, int conductance,
                                          perclab_network** out);
void perclab_network_free(perclab_network* n);

/* Effective conductance between v and everything at graph distance > n. */
perclab_status perclab_network_effective_conductance(const perclab_network* net,
                                                     uint32_t v, int n, double* out);
/* Curve over the n list (clamped at the last meaningful scale).
 * values must hold count doubles; n_used (may be NULL) receives the number
 * of points actually computed; plateau (may be NULL) gets the flag. */
perclab_status perclab_network_transience_probe(const perclab_network* net, uint32_t v,
                                                const int* n_list, size_t count,
                                                double* values, size_t* n_used,
                                                int* plateau);

/* ------------------------------------------------------- experiments */

/* Run an experiment from a config file. kind may be NULL to use
 * experiment.kind from the config. seed_override applies when has_seed is
 * nonzero. threads <= 0 defers to PERCLAB_THREADS / hardware. exit_code
 * receives the experiment's exit status (0 ok, 130 interrupted). */
perclab_status perclab_run_experiment_file(const char* config_path, const char* kind,
                                           const char* out_dir, uint64_t seed_override,
                                           int has_seed, int threads, int* exit_code);

/* Validate a config file; *report gets a newline-separated violation list
 * (empty string when valid). */
perclab_status perclab_validate_file(const char* config_path, char** report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PERCLAB_H */
