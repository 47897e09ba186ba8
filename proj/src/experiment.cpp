#include "pgl/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "csv.hpp"

namespace pgl {

std::string to_string(Method m) { return m == Method::Nkd ? "nkd" : "unfold"; }
std::string to_string(Metric m) { return m == Metric::F1 ? "f1" : "error_rate"; }

Method method_from_string(const std::string& s) {
  if (s == "nkd") return Method::Nkd;
  if (s == "unfold") return Method::Unfold;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "'");
}

Metric metric_from_string(const std::string& s) {
  if (s == "f1") return Metric::F1;
  if (s == "error_rate") return Metric::ErrorRate;
  throw Error(ErrorKind::InvalidArgument, "unknown metric '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (!(gamma1 >= 0.0 && gamma1 <= 1.0 / 3.0 + 1e-12))
    throw Error(ErrorKind::InvalidGamma, "gamma1 must lie in [0, 1/3]");
  Gamma g = gamma();
  g.g3 = std::max(0.0, g.g3);
  g.validate();
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (n_list.empty() || methods.empty() || (!exact_cov && s_list.empty()))
    throw Error(ErrorKind::InvalidArgument, "experiment lists must be nonempty");
  if (m < 2) throw Error(ErrorKind::InvalidSize, "layer count must be >= 2");
  for (Index n : n_list)
    if (n < 2) throw Error(ErrorKind::InvalidSize, "graph size must be >= 2");
  for (Index s : s_list)
    if (s < 1) throw Error(ErrorKind::InvalidSize, "sample size must be >= 1");
  if (filter != FilterKind::ExpInteraction && filter != FilterKind::ResolventInteraction)
    throw Error(ErrorKind::InvalidArgument, "experiments use the exp or inv interaction filters");
  if (!(tau_multiplier > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau multiplier must be positive");
  if (!(sigma2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma2 must be >= 0");
  if (metric == Metric::ErrorRate) {
    for (Index n : n_list)
      if (core_size >= n || top_k != core_size)
        throw Error(ErrorKind::InvalidPartition, "core size must be < N and equal to top_k");
  }
}

ExperimentConfig ExperimentConfig::for_metric(Metric metric) {
  ExperimentConfig c;
  c.metric = metric;
  if (metric == Metric::ErrorRate) {
    c.filter = FilterKind::ResolventInteraction;
    c.trials = 100;
  }
  return c;
}

namespace {

Gamma clamp_gamma(Gamma g) {
  // (g, 2g, 1 - 3g) at g = 1/3 can land a rounding error below zero.
  if (g.g3 < 0.0 && g.g3 > -1e-12) g.g3 = 0.0;
  return g;
}

FilterSpec experiment_filter(const ExperimentConfig& cfg, const MatrixXd& interaction) {
  const double tau = cfg.tau_multiplier * max_degree_scale(interaction);
  const Gamma g = clamp_gamma(cfg.gamma());
  return cfg.filter == FilterKind::ExpInteraction ? FilterSpec::exp_interaction(tau, g)
                                                  : FilterSpec::resolvent_interaction(tau, g);
}

CovarianceEstimate covariance_for(const ExperimentConfig& cfg, const FilterSpec& filter,
                                  const Graph& gc, const Graph& gg, Index s, Rng& rng) {
  if (cfg.exact_cov) {
    CovarianceEstimate c;
    c.full = exact_covariance(filter, gc, gg, cfg.sigma2).cy;
    auto u = unfold_covariance(c.full, gg.size(), gc.size());
    c.layer = std::move(u.layer);
    c.node = std::move(u.node);
    c.sample_count = 0;
    return c;
  }
  return sample_covariances(synthesize(filter, gc, gg, s, cfg.sigma2, rng));
}

struct Task {
  Index n;
  Index s;
  int trial;
};

std::vector<Task> make_tasks(const ExperimentConfig& cfg) {
  std::vector<Task> tasks;
  const std::vector<Index> s_list = cfg.exact_cov ? std::vector<Index>{0} : cfg.s_list;
  for (Index n : cfg.n_list)
    for (Index s : s_list)
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({n, s, t});
  return tasks;
}

using TaskFn = std::function<std::vector<ResultRow>(const Task&)>;

std::vector<ResultRow> run_pool(const std::vector<Task>& tasks, int threads, const TaskFn& fn) {
  std::vector<std::vector<ResultRow>> buffers(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        buffers[i] = fn(tasks[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ResultRow> rows;
  for (auto& b : buffers) rows.insert(rows.end(), b.begin(), b.end());
  return rows;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ResultRow base_row(const ExperimentConfig& cfg, const Task& task, Method method) {
  ResultRow r;
  r.config = cfg.name;
  r.method = to_string(method);
  r.n = task.n;
  r.m = cfg.m;
  r.s = task.s;
  r.gamma1 = cfg.gamma1;
  r.filter = to_string(cfg.filter);
  r.trial = task.trial;
  return r;
}

}  // namespace

TrialGraphs draw_trial_graphs(const ExperimentConfig& cfg, Index n, Rng& rng) {
  TrialGraphs t{Graph::empty(n), gen_path(cfg.m), {}, {}};
  if (cfg.metric == Metric::F1) {
    t.physical = gen_erdos_renyi(n, cfg.p_edge, rng);
  } else {
    CorePeripheryGraph cp = gen_core_periphery(n, cfg.core_size, cfg.p_cp, cfg.p_pp, rng);
    t.physical = std::move(cp.graph);
    t.core = std::move(cp.core);
  }
  t.filter = experiment_filter(cfg, interaction_matrix(t.coupling.adj(), t.physical.adj(),
                                                       clamp_gamma(cfg.gamma())));
  return t;
}

SimulatedTrial simulate_trial(const ExperimentConfig& cfg, Index n, Index s, int trial) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, cfg.name, n, trial));
  TrialGraphs tg = draw_trial_graphs(cfg, n, rng);
  SignalBatch batch = synthesize(tg.filter, tg.coupling, tg.physical, s, cfg.sigma2, rng);
  return {std::move(tg), std::move(batch)};
}

bool white_noise_spectrum(const MatrixXd& cov, Index samples) {
  if (samples < 1) return false;
  const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(cov, Eigen::EigenvaluesOnly).eigenvalues();
  const double mean = ev.mean();
  if (!(mean > 0.0)) return false;
  // Marchenko-Pastur support of an isotropic sample covariance, widened for
  // finite-size edge fluctuations.
  const double q = static_cast<double>(cov.rows()) / static_cast<double>(samples);
  const double hi = std::pow(1.0 + std::sqrt(q), 2) * 1.2;
  const double lo = q < 1.0 ? std::pow(1.0 - std::sqrt(q), 2) * 0.8 : 0.0;
  return ev.maxCoeff() / mean <= hi && ev.minCoeff() / mean >= lo;
}

LearnResult learn_product_graph(const CovarianceEstimate& covs, Index n, Index m,
                                const LearnOptions& opts) {
  LearnResult out;
  out.estimate = opts.method == Method::Nkd ? estimate_nkd(covs.full, n, m) : estimate_unfold(covs);
  out.warnings = out.estimate.warnings;
  if (white_noise_spectrum(covs.full, covs.sample_count))
    out.warnings.push_back("covariance spectrum is indistinguishable from white noise at S=" +
                           std::to_string(covs.sample_count) + "; eigenvectors are not identifiable");
  out.coupling = solve_spectemp({out.estimate.vc, opts.rho, opts.eps}, opts.solver);
  out.physical = solve_spectemp({out.estimate.vg, opts.rho, opts.eps}, opts.solver);
  if (!out.coupling.converged) out.warnings.push_back("coupling template solve hit the iteration cap");
  if (!out.physical.converged) out.warnings.push_back("physical template solve hit the iteration cap");
  if (opts.gamma)
    out.interaction = interaction_matrix(out.coupling.a_hat, out.physical.a_hat, *opts.gamma);
  return out;
}

MatrixXd interaction_edges(const LearnResult& learned, const Gamma& gamma, double thr_frac) {
  return edge_support(interaction_matrix(binarize(learned.coupling.a_hat, thr_frac),
                                         binarize(learned.physical.a_hat, thr_frac), gamma));
}

LearnResult run_from_signals(const SignalBatch& batch, Index n, Index m, const LearnOptions& opts) {
  if (batch.n != n || batch.m != m) {
    std::ostringstream os;
    os << "dimension mismatch: expected N=" << n << " M=" << m << ", found N=" << batch.n
       << " M=" << batch.m;
    throw Error(ErrorKind::Shape, os.str());
  }
  return learn_product_graph(sample_covariances(batch), n, m, opts);
}

CentralityResult centrality_from_covariances(const CovarianceEstimate& covs, Index n, Index m,
                                             Method method) {
  if (method == Method::Nkd) return detect_centrality(sym_evd(covs.full).vectors, n, m);
  return detect_centrality_unfold(sym_evd(covs.node).vectors);
}

std::vector<ResultRow> run_topology_experiment(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  if (cfg.metric != Metric::F1) throw Error(ErrorKind::InvalidArgument, "topology experiment needs metric f1");
  const Gamma gamma = clamp_gamma(cfg.gamma());

  return run_pool(make_tasks(cfg), threads, [&](const Task& task) {
    Rng rng(derive_seed(cfg.seed, cfg.name, task.n, task.trial));
    const TrialGraphs tg = draw_trial_graphs(cfg, task.n, rng);
    const MatrixXd truth = edge_support(interaction_matrix(tg.coupling.adj(), tg.physical.adj(), gamma));
    const CovarianceEstimate covs = covariance_for(cfg, tg.filter, tg.coupling, tg.physical, task.s, rng);

    std::vector<ResultRow> rows;
    for (Method method : cfg.methods) {
      const auto t0 = std::chrono::steady_clock::now();
      LearnOptions opts;
      opts.method = method;
      opts.rho = cfg.rho;
      opts.eps = cfg.eps;
      opts.solver = cfg.solver;
      opts.gamma = gamma;
      const LearnResult learned = learn_product_graph(covs, task.n, cfg.m, opts);
      ResultRow row = base_row(cfg, task, method);
      row.value = f1_score(interaction_edges(learned, gamma, cfg.thr_frac), truth);
      row.wall_seconds = seconds_since(t0);
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<ResultRow> run_centrality_experiment(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  if (cfg.metric != Metric::ErrorRate)
    throw Error(ErrorKind::InvalidArgument, "centrality experiment needs metric error_rate");

  return run_pool(make_tasks(cfg), threads, [&](const Task& task) {
    Rng rng(derive_seed(cfg.seed, cfg.name, task.n, task.trial));
    const TrialGraphs tg = draw_trial_graphs(cfg, task.n, rng);
    const CovarianceEstimate covs = covariance_for(cfg, tg.filter, tg.coupling, tg.physical, task.s, rng);

    std::vector<ResultRow> rows;
    for (Method method : cfg.methods) {
      const auto t0 = std::chrono::steady_clock::now();
      const CentralityResult c = centrality_from_covariances(covs, task.n, cfg.m, method);
      ResultRow row = base_row(cfg, task, method);
      row.value = detection_error_rate(topk(c.cg, cfg.top_k), tg.core);
      row.wall_seconds = seconds_since(t0);
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, int threads) {
  return cfg.metric == Metric::F1 ? run_topology_experiment(cfg, threads)
                                  : run_centrality_experiment(cfg, threads);
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "config,method,N,M,S,gamma1,filter,trial,value\n";
  for (const auto& r : rows)
    out << r.config << ',' << r.method << ',' << r.n << ',' << r.m << ',' << r.s << ','
        << csv::format_double(r.gamma1) << ',' << r.filter << ',' << r.trial << ','
        << csv::format_double(r.value) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string text;
  const std::filesystem::path src("<results>");
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    const auto t = csv::trim(text);
    if (t.empty() || line == 1) continue;
    std::vector<std::string> cells;
    std::stringstream ss{std::string(t)};
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 9)
      throw Error(ErrorKind::Parse, csv::where(src, line) + "expected 9 columns");
    ResultRow r;
    r.config = cells[0];
    r.method = cells[1];
    r.n = static_cast<Index>(csv::parse_double(cells[2], src, line));
    r.m = static_cast<Index>(csv::parse_double(cells[3], src, line));
    r.s = static_cast<Index>(csv::parse_double(cells[4], src, line));
    r.gamma1 = csv::parse_double(cells[5], src, line);
    r.filter = cells[6];
    r.trial = static_cast<int>(csv::parse_double(cells[7], src, line));
    r.value = csv::parse_double(cells[8], src, line);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, Index, Index, double, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : rows) {
    Key k{r.method, r.n, r.s, r.gamma1, r.filter};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    it->second.push_back(r.value);
  }
  std::vector<SummaryRow> out;
  for (const auto& k : order) {
    const auto& v = groups[k];
    SummaryRow s;
    std::tie(s.method, s.n, s.s, s.gamma1, s.filter) = k;
    s.count = static_cast<Index>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "method,N,S,gamma1,filter,mean,sd,count\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.n << ',' << r.s << ',' << csv::format_double(r.gamma1) << ','
        << r.filter << ',' << csv::format_double(r.mean) << ',' << csv::format_double(r.sd) << ','
        << r.count << '\n';
}

}  // namespace pgl
