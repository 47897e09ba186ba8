// pgl: simulate, learn and benchmark product graphs from multi-attribute signals.
//
// Exit status: 0 on success, 1 for usage or input errors, 2 when a numeric
// step fails (instability, poles, degenerate input, solver breakdown).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pgl/serialize.hpp"

namespace fs = std::filesystem;
using namespace pgl;

namespace {

// Command-line overrides for an ExperimentConfig. Optional members are only
// applied when given so a config file stays authoritative otherwise.
struct ConfigFlags {
  std::optional<std::string> name;
  std::optional<double> gamma1;
  std::optional<std::string> filter;
  std::optional<double> tau_multiplier;
  std::vector<Index> n_list;
  std::vector<Index> s_list;
  std::optional<Index> m;
  std::optional<int> trials;
  std::optional<double> sigma2;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::optional<std::string> metric;
  bool exact_cov = false;
  std::optional<double> p_edge;
  std::optional<Index> core_size;
  std::optional<double> p_cp;
  std::optional<double> p_pp;
  std::optional<Index> top_k;
  std::optional<double> rho;
  std::optional<double> eps;
  std::optional<double> thr_frac;
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
  std::optional<int> max_iter;

  void add_solver(CLI::App* app) {
    app->add_option("--rho", rho, "template-mismatch penalty");
    app->add_option("--eps", eps, "bound on |diag(A)|");
    app->add_option("--thr-frac", thr_frac, "binarization threshold, fraction of the max weight");
    app->add_option("--tol-abs", tol_abs, "absolute ADMM tolerance");
    app->add_option("--tol-rel", tol_rel, "relative ADMM tolerance");
    app->add_option("--max-iter", max_iter, "ADMM iteration cap");
  }

  void add_all(CLI::App* app) {
    app->add_option("--name", name, "experiment name (enters the seed)");
    app->add_option("--gamma1", gamma1, "coupling weight; gamma = (g, 2g, 1-3g)");
    app->add_option("--filter", filter, "exp or inv");
    app->add_option("--tau-mult", tau_multiplier, "tau = mult / max degree of A^I");
    app->add_option("--n", n_list, "physical graph sizes")->delimiter(',');
    app->add_option("--s", s_list, "sample counts")->delimiter(',');
    app->add_option("--m", m, "layer count");
    app->add_option("--trials", trials, "trials per grid point");
    app->add_option("--sigma2", sigma2, "noise variance");
    app->add_option("--seed", seed, "base seed");
    app->add_option("--methods", methods, "nkd,unfold")->delimiter(',');
    app->add_option("--metric", metric, "f1 or error_rate");
    app->add_flag("--exact-cov", exact_cov, "use the population covariance");
    app->add_option("--p-edge", p_edge, "ER edge probability");
    app->add_option("--core-size", core_size, "core-periphery core size");
    app->add_option("--p-cp", p_cp, "core-periphery cross probability");
    app->add_option("--p-pp", p_pp, "periphery-periphery probability");
    app->add_option("--top-k", top_k, "nodes reported as central");
    add_solver(app);
  }

  void apply(ExperimentConfig& c) const {
    // The metric fixes the filter and trial defaults, so it is read first.
    if (metric) {
      const Metric m_new = metric_from_string(*metric);
      if (m_new != c.metric) {
        const ExperimentConfig d = ExperimentConfig::for_metric(m_new);
        if (c.filter == ExperimentConfig::for_metric(c.metric).filter) c.filter = d.filter;
        if (c.trials == ExperimentConfig::for_metric(c.metric).trials) c.trials = d.trials;
      }
      c.metric = m_new;
    }
    if (name) c.name = *name;
    if (gamma1) c.gamma1 = *gamma1;
    if (filter) c.filter = filter_kind_from_string(*filter);
    if (tau_multiplier) c.tau_multiplier = *tau_multiplier;
    if (!n_list.empty()) c.n_list = n_list;
    if (!s_list.empty()) c.s_list = s_list;
    if (m) c.m = *m;
    if (trials) c.trials = *trials;
    if (sigma2) c.sigma2 = *sigma2;
    if (seed) c.seed = *seed;
    if (!methods.empty()) {
      c.methods.clear();
      for (const auto& s : methods) c.methods.push_back(method_from_string(s));
    }
    if (exact_cov) c.exact_cov = true;
    if (p_edge) c.p_edge = *p_edge;
    if (core_size) c.core_size = *core_size;
    if (p_cp) c.p_cp = *p_cp;
    if (p_pp) c.p_pp = *p_pp;
    if (top_k) c.top_k = *top_k;
    apply_solver(c.rho, c.eps, c.thr_frac, c.solver);
  }

  void apply_solver(double& r, double& e, double& t, SolverOptions& o) const {
    if (rho) r = *rho;
    if (eps) e = *eps;
    if (thr_frac) t = *thr_frac;
    if (tol_abs) o.tol_abs = *tol_abs;
    if (tol_rel) o.tol_rel = *tol_rel;
    if (max_iter) o.max_iter = *max_iter;
  }
};

ExperimentConfig load_config(const std::string& path, const ConfigFlags& flags) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : read_experiment_config(path);
  flags.apply(cfg);
  cfg.validate();
  return cfg;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path.string() + "'");
  return out;
}

Gamma parse_gamma(const std::vector<double>& g) {
  Gamma out;
  if (g.size() == 1) {
    out = Gamma::from_gamma1(g[0]);
    if (out.g3 < 0.0 && out.g3 > -1e-12) out.g3 = 0.0;
  } else if (g.size() == 3) {
    out = {g[0], g[1], g[2]};
  } else {
    throw Error(ErrorKind::InvalidGamma, "--gamma takes gamma1 or three weights");
  }
  out.validate();
  return out;
}

int cmd_simulate(const std::string& config, const ConfigFlags& flags, int trial,
                 const fs::path& out_path, const std::string& truth_dir) {
  ExperimentConfig cfg = load_config(config, flags);
  const Index n = cfg.n_list.front();
  const Index s = cfg.s_list.front();
  const SimulatedTrial sim = simulate_trial(cfg, n, s, trial);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_batch(sim.batch, out_path);
  if (!truth_dir.empty()) {
    const fs::path dir(truth_dir);
    fs::create_directories(dir);
    write_matrix_csv(sim.graphs.physical.adj(), dir / "physical.csv");
    write_matrix_csv(sim.graphs.coupling.adj(), dir / "coupling.csv");
    json meta{{"n", n}, {"m", cfg.m}, {"s", s}, {"trial", trial}, {"filter", sim.graphs.filter}};
    if (!sim.graphs.core.empty()) {
      std::vector<Index> core;
      for (Index i : sim.graphs.core) core.push_back(i + 1);
      meta["core"] = core;
    }
    write_json(meta, dir / "truth.json");
  }
  return 0;
}

struct LearnArgs {
  std::string signals;
  Index n = 0;
  Index m = 0;
  std::string method = "nkd";
  std::vector<double> gamma;
  std::string out_dir = "pgl_out";
  std::string truth;
  std::vector<double> sweep;
};

int cmd_learn(const LearnArgs& a, const ConfigFlags& flags) {
  LearnOptions opts;
  opts.method = method_from_string(a.method);
  flags.apply_solver(opts.rho, opts.eps, opts.thr_frac, opts.solver);
  if (!a.gamma.empty()) opts.gamma = parse_gamma(a.gamma);

  const SignalBatch batch = read_batch(a.signals);
  const LearnResult r = run_from_signals(batch, a.n, a.m, opts);

  const fs::path dir(a.out_dir);
  write_spectral_estimate(r.estimate, dir);
  write_matrix_csv(r.coupling.a_hat, dir / "coupling.csv");
  write_matrix_csv(r.physical.a_hat, dir / "physical.csv");
  write_matrix_csv(binarize(r.coupling.a_hat, opts.thr_frac), dir / "coupling_bin.csv");
  write_matrix_csv(binarize(r.physical.a_hat, opts.thr_frac), dir / "physical_bin.csv");
  if (opts.gamma) {
    write_matrix_csv(*r.interaction, dir / "interaction.csv");
    write_matrix_csv(interaction_edges(r, *opts.gamma, opts.thr_frac), dir / "interaction_edges.csv");
  }
  write_json(json{{"coupling", r.coupling}, {"physical", r.physical}, {"warnings", r.warnings}},
             dir / "report.json");

  if (!a.truth.empty()) {
    const MatrixXd truth = edge_support(read_matrix_csv(a.truth));
    if (truth.rows() != a.n)
      throw Error(ErrorKind::Shape, "truth graph has " + std::to_string(truth.rows()) +
                                        " nodes, expected " + std::to_string(a.n));
    std::vector<double> thr = a.sweep;
    if (thr.empty()) thr = {opts.thr_frac};
    auto out = open_output(dir / "threshold_sweep.csv");
    out << "thr_frac,f1\n";
    for (const auto& p : f1_threshold_sweep(r.physical.a_hat, truth, thr))
      out << p.thr_frac << ',' << p.f1 << '\n';
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int cmd_centrality(const std::string& signals, Index n, Index m, const std::string& method,
                   Index k, const std::string& out_path) {
  const SignalBatch batch = read_batch(signals);
  if (batch.n != n || batch.m != m) {
    std::ostringstream os;
    os << "dimension mismatch: expected N=" << n << " M=" << m << ", found N=" << batch.n
       << " M=" << batch.m;
    throw Error(ErrorKind::Shape, os.str());
  }
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "--top-k must lie in [1, N]");
  const CentralityResult c =
      centrality_from_covariances(sample_covariances(batch), n, m, method_from_string(method));
  json j = centrality_json(c, topk(c.cg, k));
  j["method"] = method;
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    auto out = open_output(out_path);
    out << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_experiment(const std::string& config, const ConfigFlags& flags, int threads,
                   const std::string& out_path, const std::string& summary_path) {
  const ExperimentConfig cfg = load_config(config, flags);
  const auto rows = run_experiment(cfg, threads);
  if (out_path.empty() || out_path == "-") {
    write_results_csv(rows, std::cout);
  } else {
    auto out = open_output(out_path);
    write_results_csv(rows, out);
  }
  if (!summary_path.empty()) {
    auto out = open_output(summary_path);
    write_summary_csv(aggregate(rows), out);
  }
  return 0;
}

int cmd_aggregate(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<ResultRow> rows;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    auto part = read_results_csv(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "no result rows to aggregate");
  if (out_path.empty() || out_path == "-") {
    write_summary_csv(aggregate(rows), std::cout);
  } else {
    auto out = open_output(out_path);
    write_summary_csv(aggregate(rows), out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product graph learning from multi-attribute graph signals"};
  app.require_subcommand(1);

  ConfigFlags sim_flags, exp_flags, learn_flags;
  std::string sim_config, sim_out = "signals.csv", sim_truth;
  int sim_trial = 0;
  auto* sim = app.add_subcommand("simulate", "write the signals of one harness trial");
  sim->add_option("--config", sim_config, "experiment config JSON");
  sim->add_option("--trial", sim_trial, "trial index");
  sim->add_option("-o,--out", sim_out, "signal CSV path");
  sim->add_option("--truth-dir", sim_truth, "also write the true graphs here");
  sim_flags.add_all(sim);

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "learn both factor graphs from a signal CSV");
  learn->add_option("--signals", la.signals, "signal CSV")->required();
  learn->add_option("--n", la.n, "physical graph size")->required();
  learn->add_option("--m", la.m, "layer count")->required();
  learn->add_option("--method", la.method, "nkd or unfold");
  learn->add_option("--gamma", la.gamma, "gamma1, or g1,g2,g3; enables interaction output")
      ->delimiter(',');
  learn->add_option("-o,--out-dir", la.out_dir, "output directory");
  learn->add_option("--truth", la.truth, "true physical adjacency CSV for F1 scoring");
  learn->add_option("--thr-sweep", la.sweep, "thresholds to score against --truth")->delimiter(',');
  learn_flags.add_solver(learn);
  int learn_threads = 1;
  learn->add_option("--threads", learn_threads, "accepted for symmetry; learning is serial");

  std::string c_signals, c_method = "nkd", c_out;
  Index c_n = 0, c_m = 0, c_k = 10;
  auto* cen = app.add_subcommand("centrality", "detect the most central physical nodes");
  cen->add_option("--signals", c_signals, "signal CSV")->required();
  cen->add_option("--n", c_n, "physical graph size")->required();
  cen->add_option("--m", c_m, "layer count")->required();
  cen->add_option("--method", c_method, "nkd or unfold");
  cen->add_option("--top-k", c_k, "number of nodes to report");
  cen->add_option("-o,--out", c_out, "JSON output path (default stdout)");

  std::string e_config, e_out, e_summary;
  int e_threads = 1;
  auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo study");
  exp->add_option("--config", e_config, "experiment config JSON");
  exp->add_option("--threads", e_threads, "worker threads")->check(CLI::PositiveNumber);
  exp->add_option("-o,--out", e_out, "results CSV (default stdout)");
  exp->add_option("--summary", e_summary, "also write the aggregated summary");
  exp_flags.add_all(exp);

  std::vector<std::string> a_inputs;
  std::string a_out;
  auto* agg = app.add_subcommand("aggregate", "summarize results CSVs");
  agg->add_option("inputs", a_inputs, "results CSV files")->required();
  agg->add_option("-o,--out", a_out, "summary CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_config, sim_flags, sim_trial, sim_out, sim_truth);
    if (*learn) return cmd_learn(la, learn_flags);
    if (*cen) return cmd_centrality(c_signals, c_n, c_m, c_method, c_k, c_out);
    if (*exp) return cmd_experiment(e_config, exp_flags, e_threads, e_out, e_summary);
    if (*agg) return cmd_aggregate(a_inputs, a_out);
  } catch (const Error& e) {
    std::cerr << "pgl: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.is_numeric() ? 2 : 1;
  } catch (const json::exception& e) {
    std::cerr << "pgl: bad JSON: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pgl: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
