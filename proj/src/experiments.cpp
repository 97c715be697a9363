#include "perclab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "perclab/clusters.hpp"
#include "perclab/errors.hpp"
#include "perclab/network.hpp"
#include "perclab/parallel.hpp"
#include "perclab/regularity.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class OutputWriter {
 public:
  OutputWriter(const std::string& dir, std::string kind, std::uint64_t seed, int threads,
               std::string config_text)
      : dir_(dir), kind_(std::move(kind)), seed_(seed), threads_(threads),
        config_text_(std::move(config_text)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    fs::path p = fs::path(dir_) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + p.string());
    outputs_.push_back(p.string());
    return out;
  }

  const std::vector<std::string>& outputs() const { return outputs_; }

  void write_manifest(bool partial) {
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    ordered_json m;
    m["kind"] = kind_;
    m["seed"] = seed_;
    m["threads"] = threads_;
    m["version"] = kVersion;
    m["outputs"] = outputs_;
    m["partial"] = partial;
    m["wall_time_s"] = elapsed.count();
    m["config"] = config_text_;
    fs::path p = fs::path(dir_) / "manifest.json";
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open manifest: " + p.string());
    out << m.dump(2) << "\n";
  }

 private:
  std::string dir_;
  std::string kind_;
  std::uint64_t seed_;
  int threads_;
  std::string config_text_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

void write_cloud_csv(std::ofstream& out, const MarkedCloud& mc) {
  const auto& dom = mc.base.domain;
  out << "# d=" << dom.dim << " boundary=" << (dom.torus ? "torus" : "free");
  out << " sides=";
  for (int i = 0; i < dom.dim; ++i) out << (i ? "x" : "") << fmt(dom.sides[i]);
  out << " source="
      << (mc.base.source == PointSource::poisson ? "poisson" : "lattice")
      << " param=" << fmt(mc.base.source_param) << " seed=" << mc.base.seed
      << " mark_seed=" << mc.mark_seed << "\n";
  for (int i = 0; i < dom.dim; ++i) out << "x" << (i + 1) << ",";
  out << "mark\n";
  for (std::size_t i = 0; i < mc.size(); ++i) {
    auto pt = mc.point(i);
    for (int j = 0; j < dom.dim; ++j) out << fmt(pt[j]) << ",";
    out << fmt(mc.marks[i]) << "\n";
  }
}

void write_edges_csv(std::ofstream& out, const GeoGraph& g) {
  out << "i,j,length\n";
  for (const GeoEdge& e : g.edges)
    out << e.a << "," << e.b << "," << fmt(e.length) << "\n";
}

// ------------------------------------------------------------ config -> types

const std::set<std::string>& known_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> tables = {
      {"domain", {"d", "side", "boundary"}},
      {"point", {"source", "intensity", "retention"}},
      {"kernel",
       {"family", "beta", "delta", "gamma", "gamma2", "p", "g", "rho"}},
      {"builder", {"method", "cell_side"}},
      {"experiment", {"kind", "seed", "replicas", "out", "threads"}},
      {"theta", {"p_grid", "n", "k_reach", "estimator"}},
      {"sublinear", {"lambda", "n_grid"}},
      {"truncation", {"ell_grid", "p", "n", "k_reach", "estimator"}},
      {"delta_eff", {"mu", "r0", "ratio", "points"}},
      {"renorm",
       {"mode", "theta", "lambda", "ell", "k", "max_stage", "side", "mu_star", "nu",
        "mu", "omega", "rho_seq", "sigma_seq", "n1"}},
      {"transience",
       {"n_list", "conductance", "side", "seeds", "source_vertex"}},
      {"lemma_check", {"check", "n", "mu", "trials", "v", "D", "C"}},
  };
  static const std::set<std::string> empty;
  auto it = tables.find(section);
  return it == tables.end() ? empty : it->second;
}

}  // namespace

KernelSpec kernel_from_config(const Config& cfg) {
  std::string family = cfg.get_string("kernel", "family");
  int d = static_cast<int>(cfg.get_long_or("domain", "d", 2));
  if (family == "bernoulli_nn")
    return KernelSpec::bernoulli_nn(d, cfg.get_double_or("kernel", "p", 0.5));
  if (family == "long_range")
    return KernelSpec::long_range(d, cfg.get_double("kernel", "beta"),
                                  cfg.get_double("kernel", "delta"));
  if (family == "scale_free")
    return KernelSpec::scale_free(d, cfg.get_double("kernel", "beta"),
                                  cfg.get_double("kernel", "gamma"),
                                  cfg.get_double("kernel", "delta"));
  if (family == "wdrcm") {
    std::string g = cfg.get_string_or("kernel", "g", "product");
    GKind gk = g == "product"   ? GKind::product
               : g == "min_max" ? GKind::min_max
               : g == "max"     ? GKind::max_only
                                : throw ParameterError("kernel: unknown g kind '" + g + "'");
    std::string rho = cfg.get_string_or("kernel", "rho", "pareto_capped");
    RhoKind rk = rho == "pareto_capped" ? RhoKind::pareto_capped
                 : rho == "unit_capped"
                     ? RhoKind::unit_capped
                     : throw ParameterError("kernel: unknown rho kind '" + rho + "'");
    return KernelSpec::wdrcm(d, gk, cfg.get_double_or("kernel", "gamma", 0.0),
                             cfg.get_double_or("kernel", "gamma2", 0.0), rk,
                             cfg.get_double("kernel", "beta"),
                             cfg.get_double("kernel", "delta"));
  }
  throw ParameterError("kernel: unknown family '" + family + "'");
}

ModelSpec model_from_config(const Config& cfg) {
  ModelSpec m;
  m.dim = static_cast<int>(cfg.get_long_or("domain", "d", 2));
  std::string boundary = cfg.get_string_or("domain", "boundary", "free");
  if (boundary != "free" && boundary != "torus")
    throw ParameterError("domain: boundary must be free or torus");
  m.torus = boundary == "torus";
  std::string src = cfg.get_string_or("point", "source", "poisson");
  if (src == "poisson") {
    m.source = PointSource::poisson;
    m.source_param = cfg.get_double_or("point", "intensity", 1.0);
  } else if (src == "lattice") {
    m.source = PointSource::lattice;
    m.source_param = cfg.get_double_or("point", "retention", 1.0);
  } else {
    throw ParameterError("point: source must be poisson or lattice");
  }
  m.kernel = kernel_from_config(cfg);
  std::string method = cfg.get_string_or("builder", "method", "cells");
  if (method == "cells")
    m.builder = BuilderMethod::cells;
  else if (method == "naive")
    m.builder = BuilderMethod::naive;
  else
    throw ParameterError("builder: method must be cells or naive");
  m.cell_side = cfg.get_double_or("builder", "cell_side", 0.0);
  return m;
}

RenormParams renorm_params_from_config(const Config& cfg) {
  const int d = static_cast<int>(cfg.get_long_or("domain", "d", 2));
  const double theta = cfg.get_double_or("renorm", "theta", 0.5);
  const double lambda = cfg.get_double_or("renorm", "lambda", 0.8);
  const long ell = cfg.get_long_or("renorm", "ell", 4);
  const double k = cfg.get_double_or("renorm", "k", 1.0);
  const int max_stage = static_cast<int>(cfg.get_long_or("renorm", "max_stage", 1));

  const bool explicit_exponents = cfg.has("renorm", "mu_star");
  RenormParams p;
  if (!explicit_exponents) {
    p = derive_params(kernel_from_config(cfg), d, theta, lambda, ell, k, max_stage);
  } else {
    p.dim = d;
    p.ell = ell;
    p.k_reach = k;
    p.theta = theta;
    p.lambda = lambda;
    p.mu_star = cfg.get_double("renorm", "mu_star");
    p.nu = cfg.get_double("renorm", "nu");
    p.mu = cfg.get_double_or("renorm", "mu", 1.0 - p.nu * (1.0 - p.mu_star));
    p.omega = cfg.get_double("renorm", "omega");
    for (int n = 1; n <= max_stage; ++n) {
      p.rho_seq.push_back(std::min(0.24, 1.5 / (static_cast<double>(n) * n)));
      double target = std::pow(static_cast<double>(n), p.omega);
      long sig = static_cast<long>(std::ceil(target));
      if (sig % 2 == 0) ++sig;
      p.sigma_seq.push_back(std::max<long>(1, sig));
    }
  }
  if (cfg.has("renorm", "rho_seq")) {
    p.rho_seq = cfg.get_doubles("renorm", "rho_seq");
  }
  if (cfg.has("renorm", "sigma_seq")) {
    p.sigma_seq = cfg.get_longs("renorm", "sigma_seq");
  }
  return p;
}

std::vector<std::string> validate_config(const Config& cfg) {
  std::vector<std::string> problems;
  for (const auto& section : cfg.section_names()) {
    const auto& known = known_keys(section);
    if (known.empty()) {
      problems.push_back("unknown section '" + section + "'");
      continue;
    }
    for (const auto& key : cfg.keys(section))
      if (!known.count(key))
        problems.push_back("unknown key '" + section + "." + key + "'");
  }
  if (cfg.has_section("kernel")) {
    try {
      kernel_from_config(cfg);
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  }
  if (cfg.has_section("point") || cfg.has_section("domain")) {
    try {
      model_from_config(cfg);
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  }
  if (cfg.has_section("renorm")) {
    try {
      RenormParams p = renorm_params_from_config(cfg);
      auto bad = p.check();
      problems.insert(problems.end(), bad.begin(), bad.end());
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  }
  long replicas = cfg.get_long_or("experiment", "replicas", 100);
  if (replicas < 1) problems.push_back("experiment.replicas must be >= 1");
  return problems;
}

namespace {

struct ExperimentContext {
  Config cfg;
  std::string kind;
  std::uint64_t seed;
  int threads;
  OutputWriter* writer;
};

void run_generate(ExperimentContext& ctx, bool with_graph) {
  ModelSpec model = model_from_config(ctx.cfg);
  double side = ctx.cfg.get_double("domain", "side");
  MarkedCloud mc = model.sample_cloud(side, ctx.seed, false);
  {
    auto out = ctx.writer->open("cloud.csv");
    write_cloud_csv(out, mc);
  }
  if (with_graph) {
    GeoGraph g = model.builder == BuilderMethod::naive
                     ? build_graph_naive(mc, model.kernel, ctx.seed)
                     : build_graph_cells(mc, model.kernel, model.cell_side, ctx.seed);
    auto out = ctx.writer->open("edges.csv");
    write_edges_csv(out, g);
  }
}

bool run_theta_like(ExperimentContext& ctx, const std::string& section, bool sweep_ell) {
  ModelSpec model = model_from_config(ctx.cfg);
  double n = ctx.cfg.get_double_or(section, "n", 40.0);
  double k_reach = ctx.cfg.get_double_or(section, "k_reach", 2.0);
  long replicas = ctx.cfg.get_long_or("experiment", "replicas", 200);
  std::string est_name = ctx.cfg.get_string_or(section, "estimator", "origin_to_boundary");
  ThetaEstimator kind = est_name == "largest_component_fraction"
                            ? ThetaEstimator::largest_component_fraction
                            : ThetaEstimator::origin_to_boundary;

  auto out = ctx.writer->open(sweep_ell ? "truncate_sweep.csv" : "theta_sweep.csv");
  out << (sweep_ell ? "estimator,ell,n,value,ci,replicas,seed\n"
                    : "estimator,p,n,value,ci,replicas,seed\n");

  bool interrupted = false;
  if (!sweep_ell) {
    std::vector<double> p_grid = ctx.cfg.get_doubles("theta", "p_grid");
    for (double p : p_grid) {
      if (interrupt_flag().load()) {
        interrupted = true;
        break;
      }
      ThetaEstimate est =
          estimate_theta(model, p, n, k_reach, replicas, ctx.seed, kind, ctx.threads);
      out << est_name << "," << fmt(p) << "," << fmt(n) << "," << fmt(est.value) << ","
          << fmt(est.ci_half) << "," << replicas << "," << ctx.seed << "\n";
    }
  } else {
    std::vector<double> ell_grid = ctx.cfg.get_doubles("truncation", "ell_grid");
    double p = ctx.cfg.get_double_or("truncation", "p", 1.0);
    for (double ell : ell_grid) {
      if (interrupt_flag().load()) {
        interrupted = true;
        break;
      }
      // truncation sweep: same replicas and coupling, edges filtered by length
      std::vector<char> hits(static_cast<size_t>(replicas), 0);
      parallel_for(static_cast<size_t>(replicas), ctx.threads, [&](std::size_t r) {
        std::uint64_t rseed = derive_seed(ctx.seed, r);
        GeoGraph g = model.sample_graph(n, rseed, true);
        if (std::isfinite(ell)) g = truncate(g, ell);
        if (p < 1.0) g = bond_percolate(g, p, rseed);
        bool hit = false;
        if (g.num_vertices() > 0) {
          Partition part = components(g);
          if (kind == ThetaEstimator::largest_component_fraction) {
            hit = part.component_size(0) == part.largest_size();
          } else {
            std::uint32_t oroot = part.find(0);
            for (std::size_t i = 0; i < g.num_vertices() && !hit; ++i) {
              if (part.find(static_cast<std::uint32_t>(i)) != oroot) continue;
              if (boundary_distance(g.vertices.base.domain, g.vertices.point(i)) <= k_reach)
                hit = true;
            }
          }
        }
        hits[r] = hit ? 1 : 0;
      });
      long count = 0;
      for (char h : hits) count += h;
      double value = static_cast<double>(count) / static_cast<double>(replicas);
      out << est_name << "," << fmt(ell) << "," << fmt(n) << "," << fmt(value) << ","
          << fmt(freq_ci_half(value, replicas)) << "," << replicas << "," << ctx.seed
          << "\n";
    }
  }
  return interrupted;
}

bool run_sublinear(ExperimentContext& ctx) {
  ModelSpec model = model_from_config(ctx.cfg);
  double lambda = ctx.cfg.get_double("sublinear", "lambda");
  std::vector<double> n_grid = ctx.cfg.get_doubles("sublinear", "n_grid");
  long replicas = ctx.cfg.get_long_or("experiment", "replicas", 200);

  auto out = ctx.writer->open("sublinear.csv");
  out << "estimator,p,n,value,ci,replicas,seed\n";  // p column carries lambda
  bool interrupted = false;
  for (double n : n_grid) {
    if (interrupt_flag().load()) {
      interrupted = true;
      break;
    }
    FreqEstimate est =
        sublinear_cluster_prob(model, lambda, n, replicas, ctx.seed, ctx.threads);
    out << "sublinear," << fmt(lambda) << "," << fmt(n) << "," << fmt(est.value) << ","
        << fmt(est.ci_half) << "," << replicas << "," << ctx.seed << "\n";
  }
  return interrupted;
}

void run_delta_eff(ExperimentContext& ctx) {
  KernelSpec kernel = kernel_from_config(ctx.cfg);
  double mu = ctx.cfg.get_double_or("delta_eff", "mu", 0.0);
  double r0 = ctx.cfg.get_double_or("delta_eff", "r0", 100.0);
  double ratio = ctx.cfg.get_double_or("delta_eff", "ratio", 2.0);
  int points = static_cast<int>(ctx.cfg.get_long_or("delta_eff", "points", 8));
  DeltaEffEstimate est = estimate_delta_eff(kernel, mu, geometric_grid(r0, ratio, points));
  auto out = ctx.writer->open("delta_eff.csv");
  out << "mu,r,integral,slope,residual\n";
  for (std::size_t i = 0; i < est.r_grid.size(); ++i) {
    out << fmt(est.mu) << "," << fmt(est.r_grid[i]) << "," << fmt(est.integral_values[i])
        << "," << fmt(est.slope) << "," << fmt(est.residual) << "\n";
  }
}

void run_renorm(ExperimentContext& ctx) {
  ModelSpec model = model_from_config(ctx.cfg);
  std::string mode = ctx.cfg.get_string_or("renorm", "mode", "alive");
  int max_stage = static_cast<int>(ctx.cfg.get_long_or("renorm", "max_stage", 1));
  double side = ctx.cfg.get_double("renorm", "side");

  GeoGraph graph = model.sample_graph(side, ctx.seed, false);
  RenormReport report;
  if (mode == "alive") {
    RenormParams params = renorm_params_from_config(ctx.cfg);
    report = survey_alive(graph, params, max_stage);
  } else if (mode == "good") {
    int n1 = static_cast<int>(ctx.cfg.get_long_or("renorm", "n1", 1));
    TransienceParams tp = derive_transience_params(model.kernel, model.dim, n1);
    if (ctx.cfg.has("renorm", "lambda")) tp.lambda = ctx.cfg.get_double("renorm", "lambda");
    if (ctx.cfg.has("renorm", "mu")) tp.mu = ctx.cfg.get_double("renorm", "mu");
    report = survey_good(graph, tp, max_stage);
  } else {
    throw ParameterError("renorm: mode must be alive or good");
  }

  {
    auto out = ctx.writer->open("renorm_cubes.jsonl");
    for (const auto& c : report.cubes) {
      ordered_json row;
      row["stage"] = c.stage;
      row["center"] = c.center;
      row[report.mode] = c.positive;
      row["witness_size"] = c.witness_size;
      row["clipped"] = c.clipped;
      row["exact"] = c.exact;
      out << row.dump() << "\n";
    }
  }
  auto out = ctx.writer->open("renorm_stages.csv");
  out << "stage,cubes,positive,fraction,clipped\n";
  for (const auto& s : report.stages) {
    out << s.stage << "," << s.cubes << "," << s.positive << "," << fmt(s.fraction) << ","
        << s.clipped << "\n";
  }
}

bool run_transience(ExperimentContext& ctx) {
  ModelSpec model = model_from_config(ctx.cfg);
  double side = ctx.cfg.get_double("transience", "side");
  auto n_longs = ctx.cfg.get_longs("transience", "n_list");
  std::vector<int> n_list(n_longs.begin(), n_longs.end());
  long seeds = ctx.cfg.get_long_or("transience", "seeds", 1);
  std::string cname = ctx.cfg.get_string_or("transience", "conductance", "unit");
  ConductanceKind ckind = cname == "inverse_length" ? ConductanceKind::inverse_length
                                                    : ConductanceKind::unit;
  std::string pick = ctx.cfg.get_string_or("transience", "source_vertex", "nearest_origin");

  auto summary = ctx.writer->open("transience_summary.jsonl");
  bool interrupted = false;
  for (long k = 0; k < seeds; ++k) {
    if (interrupt_flag().load()) {
      interrupted = true;
      break;
    }
    std::uint64_t seed_k = derive_seed(ctx.seed, static_cast<std::uint64_t>(k), 77);
    GeoGraph g = model.sample_graph(side, seed_k, false);
    Partition part = components(g);
    auto lists = part.component_lists();
    std::size_t best = 0;
    for (std::size_t i = 1; i < lists.size(); ++i)
      if (lists[i].size() > lists[best].size()) best = i;
    if (lists.empty() || lists[best].size() < 2)
      throw NumericError("transience: sampled graph has no usable component");
    GeoGraph comp = subgraph_by_vertices(g, lists[best]);

    std::uint32_t source = 0;
    if (pick == "min_mark") {
      for (std::uint32_t i = 1; i < comp.num_vertices(); ++i)
        if (comp.vertices.marks[i] < comp.vertices.marks[source]) source = i;
    } else {
      auto norm2 = [&](std::uint32_t i) {
        double s = 0;
        for (double x : comp.vertices.point(i)) s += x * x;
        return s;
      };
      for (std::uint32_t i = 1; i < comp.num_vertices(); ++i)
        if (norm2(i) < norm2(source)) source = i;
    }

    Network net = from_graph(comp, ckind);
    ConductanceCurve curve = transience_probe(net, source, n_list);

    auto out = ctx.writer->open("conductance_curve_seed" + std::to_string(k) + ".csv");
    out << "n,conductance,residual\n";
    for (std::size_t i = 0; i < curve.n_values.size(); ++i)
      out << curve.n_values[i] << "," << fmt(curve.values[i]) << ","
          << fmt(curve.residuals[i]) << "\n";

    ordered_json row;
    row["seed_index"] = k;
    row["seed"] = seed_k;
    row["component_size"] = lists[best].size();
    row["source"] = source;
    row["flag"] = curve.plateau ? "plateau" : "decaying";
    row["n"] = curve.n_values;
    row["conductance"] = curve.values;
    summary << row.dump() << "\n";
  }
  return interrupted;
}

void run_lemma_checks(ExperimentContext& ctx) {
  std::string which = ctx.cfg.get_string_or("lemma_check", "check", "both");
  auto out = ctx.writer->open("lemma_checks.jsonl");
  if (which == "regularity" || which == "both") {
    auto n = static_cast<std::uint64_t>(ctx.cfg.get_long_or("lemma_check", "n", 1000000));
    double mu = ctx.cfg.get_double_or("lemma_check", "mu", 0.4);
    long trials = ctx.cfg.get_long_or("lemma_check", "trials", 1000);
    LemmaReport rep = mc_check_regularity(n, mu, trials, ctx.seed, ctx.threads);
    out << rep.to_json() << "\n";
  }
  if (which == "connection" || which == "both") {
    KernelSpec kernel = kernel_from_config(ctx.cfg);
    auto v = static_cast<std::uint64_t>(ctx.cfg.get_long_or("lemma_check", "v", 200));
    double mu = ctx.cfg.get_double_or("lemma_check", "mu", 0.3);
    double D = ctx.cfg.get_double_or("lemma_check", "D", 100.0);
    double C = ctx.cfg.get_double_or("lemma_check", "C", 1.0 / 9.0);
    long trials = ctx.cfg.get_long_or("lemma_check", "trials", 1000);
    LemmaReport rep =
        mc_check_connection(kernel, v, mu, D, trials, ctx.seed, C, 10000, ctx.threads);
    out << rep.to_json() << "\n";
  }
}

}  // namespace

RunResult run_experiment(const Config& cfg, const std::string& kind_arg,
                         const RunOptions& opts) {
  RunResult result;
  std::string kind =
      kind_arg.empty() ? cfg.get_string_or("experiment", "kind", "") : kind_arg;
  if (kind.empty()) {
    result.exit_code = 2;
    result.message = "no experiment kind given (experiment.kind or subcommand)";
    return result;
  }
  auto problems = validate_config(cfg);
  if (!problems.empty()) {
    result.exit_code = 2;
    result.message = "config validation failed:";
    for (const auto& p : problems) result.message += "\n  " + p;
    return result;
  }

  std::uint64_t seed =
      opts.seed_override.value_or(cfg.get_u64_or("experiment", "seed", 1));
  int threads = opts.threads > 0
                    ? opts.threads
                    : static_cast<int>(cfg.get_long_or("experiment", "threads", 0));
  std::string dir = !opts.out_dir.empty() ? opts.out_dir
                                          : cfg.get_string_or("experiment", "out", ".");

  OutputWriter writer(dir, kind, seed, threads, cfg.text());
  ExperimentContext ctx{cfg, kind, seed, threads, &writer};

  bool interrupted = false;
  try {
    if (kind == "generate") {
      run_generate(ctx, false);
    } else if (kind == "build") {
      run_generate(ctx, true);
    } else if (kind == "theta_sweep") {
      interrupted = run_theta_like(ctx, "theta", false);
    } else if (kind == "truncation") {
      interrupted = run_theta_like(ctx, "truncation", true);
    } else if (kind == "sublinear") {
      interrupted = run_sublinear(ctx);
    } else if (kind == "delta_eff") {
      run_delta_eff(ctx);
    } else if (kind == "renorm") {
      run_renorm(ctx);
    } else if (kind == "transience") {
      interrupted = run_transience(ctx);
    } else if (kind == "lemma_checks") {
      run_lemma_checks(ctx);
    } else {
      result.exit_code = 2;
      result.message = "unknown experiment kind '" + kind + "'";
      return result;
    }
  } catch (const std::exception& e) {
    writer.write_manifest(true);
    result.exit_code = 1;
    result.partial = true;
    result.message = e.what();
    result.outputs = writer.outputs();
    return result;
  }

  writer.write_manifest(interrupted);
  result.partial = interrupted;
  result.exit_code = interrupted ? 130 : 0;
  result.outputs = writer.outputs();
  return result;
}

}  // namespace perclab
