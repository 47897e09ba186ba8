#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pgl/centrality.hpp"
#include "pgl/random.hpp"
#include "pgl/signals.hpp"
#include "pgl/spectral.hpp"
#include "pgl/topology.hpp"

namespace pgl {

enum class Method { Nkd, Unfold };
enum class Metric { F1, ErrorRate };

std::string to_string(Method m);
std::string to_string(Metric m);
Method method_from_string(const std::string& s);
Metric metric_from_string(const std::string& s);

/// One Monte-Carlo study. The coupling graph is always the path on `m`
/// nodes; the physical graph is Erdos-Renyi(p_edge) for the F1 metric and
/// core-periphery for the error-rate metric. Coupling weights follow
/// (gamma1, 2 gamma1, 1 - 3 gamma1) and the filter scale is
/// tau_multiplier / max row sum of A^I.
///
/// Topology F1 binarizes each learned factor at thr_frac, assembles the
/// interaction graph from the binary factors with the known gamma, and
/// compares its edge set with that of the true A^I.
struct ExperimentConfig {
  std::string name = "experiment";
  double gamma1 = 0.01;
  FilterKind filter = FilterKind::ExpInteraction;
  double tau_multiplier = 1.0;
  std::vector<Index> n_list{10};
  std::vector<Index> s_list{1000};
  Index m = 3;
  int trials = 20;
  double sigma2 = 0.01;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::Nkd, Method::Unfold};
  Metric metric = Metric::F1;
  bool exact_cov = false;

  double p_edge = 0.4;

  Index core_size = 10;
  double p_cp = 0.2;
  double p_pp = 0.05;
  Index top_k = 10;

  double rho = 40.0;
  double eps = 1e-6;
  double thr_frac = 0.3;
  SolverOptions solver;

  Gamma gamma() const { return Gamma::from_gamma1(gamma1); }
  void validate() const;

  /// Defaults for a study type: centrality runs use the resolvent filter
  /// and 100 trials per point.
  static ExperimentConfig for_metric(Metric metric);
};

/// Ground truth and filter of one harness trial.
struct TrialGraphs {
  Graph physical;
  Graph coupling;
  std::vector<Index> core;  // centrality studies only
  FilterSpec filter;
};

/// Draws the graphs exactly as trial `trial` at size n does; rng must be
/// seeded with derive_seed(seed, name, n, trial).
TrialGraphs draw_trial_graphs(const ExperimentConfig& cfg, Index n, Rng& rng);

struct SimulatedTrial {
  TrialGraphs graphs;
  SignalBatch batch;
};

/// The sampled signals the harness uses for (n, s, trial).
SimulatedTrial simulate_trial(const ExperimentConfig& cfg, Index n, Index s, int trial);

struct ResultRow {
  std::string config;
  std::string method;
  Index n = 0;
  Index m = 0;
  Index s = 0;  // 0 in exact-covariance mode
  double gamma1 = 0.0;
  std::string filter;
  int trial = 0;
  double value = 0.0;
  double wall_seconds = 0.0;  // not part of the results CSV
};

/// Trials run on a pool of `threads` workers; output order is (N, S, trial,
/// method) regardless of scheduling.
std::vector<ResultRow> run_topology_experiment(const ExperimentConfig& cfg, int threads = 1);
std::vector<ResultRow> run_centrality_experiment(const ExperimentConfig& cfg, int threads = 1);
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, int threads = 1);

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);

struct SummaryRow {
  std::string method;
  Index n = 0;
  Index s = 0;
  double gamma1 = 0.0;
  std::string filter;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single trial
  Index count = 0;
};

/// Groups by (method, N, S, gamma1, filter) in first-appearance order.
std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

struct LearnOptions {
  Method method = Method::Nkd;
  double rho = 40.0;
  double eps = 1e-6;
  double thr_frac = 0.3;
  SolverOptions solver;
  std::optional<Gamma> gamma;  // assemble Â^I when known
};

struct LearnResult {
  SpectralEstimate estimate;
  SolveReport coupling;
  SolveReport physical;
  std::optional<MatrixXd> interaction;
  std::vector<std::string> warnings;
};

/// True when every eigenvalue of a sample covariance from `samples`
/// observations lies inside the white-noise (Marchenko-Pastur) band.
bool white_noise_spectrum(const MatrixXd& cov, Index samples);

/// Spectral estimation followed by template reconstruction of both factors.
LearnResult learn_product_graph(const CovarianceEstimate& covs, Index n, Index m,
                                const LearnOptions& opts);

/// Edge set of Â^I assembled from the binarized learned factors. Topology
/// F1 compares this against edge_support(A^I).
MatrixXd interaction_edges(const LearnResult& learned, const Gamma& gamma, double thr_frac);

/// Learn from externally prepared signals; checks the declared (N, M).
LearnResult run_from_signals(const SignalBatch& batch, Index n, Index m,
                             const LearnOptions& opts);

CentralityResult centrality_from_covariances(const CovarianceEstimate& covs, Index n, Index m,
                                             Method method);

}  // namespace pgl
