// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "pgl/experiment.hpp"

using namespace pgl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

bool run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool pass = o.pass && in_time;
  std::printf("%s %d %s: %s; %.2fs of %.0fs budget%s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), dt, budget_s, in_time ? "" : " (over budget)");
  std::fflush(stdout);
  return pass;
}

// Well-separated factor spectra and a cubic bivariate filter with pairwise
// distinct response magnitudes.
struct Instance {
  Graph gc, gg;
  FilterSpec filter;
};

Instance distinct_instance(Index n, Index m, Rng& rng) {
  for (;;) {
    const Graph gc(oracle::random_symmetric(m, rng));
    const Graph gg(oracle::random_symmetric(n, rng));
    const EigDecomp ec = sym_evd(gc.adj()), eg = sym_evd(gg.adj());
    if (ec.min_gap < 0.05 || eg.min_gap < 0.05) continue;
    const FilterSpec f = FilterSpec::poly(oracle::random_symmetric(4, rng).topLeftCorner(3, 3));
    if (freq_response(f, ec.values, eg.values).min_magnitude_gap < 1e-3) continue;
    return {gc, gg, f};
  }
}

Outcome exact_recovery() {
  Rng rng(derive_seed(1, "acceptance-recovery"));
  int ok = 0;
  double worst = 1.0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 5 + t % 4;
    const Instance in = distinct_instance(n, 3, rng);
    const SpectralEstimate e = estimate_nkd(exact_covariance(in.filter, in.gc, in.gg, 0.0).cy, n, 3);
    const double sc = basis_match_score(e.vc, sym_evd(in.gc.adj()).vectors);
    const double sg = basis_match_score(e.vg, sym_evd(in.gg.adj()).vectors);
    worst = std::min({worst, sc, sg});
    if (sc >= 1 - 1e-8 && sg >= 1 - 1e-8) ++ok;
  }
  return {ok == 50, fmt("%.0f/50 instances recovered, worst score 1-%.1e", ok, 1 - worst)};
}

Outcome unfolding_oracle() {
  Rng rng(derive_seed(1, "acceptance-unfold"));
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Index n = 3 + t % 5, m = 2 + t % 3;
    const Graph gc(oracle::random_symmetric(m, rng)), gg(oracle::random_symmetric(n, rng));
    const FilterSpec f = FilterSpec::poly(oracle::random_symmetric(4, rng).topLeftCorner(3, 3));
    const MatrixXd cy = exact_covariance(f, gc, gg, 0.0).cy;
    const auto u = population_unfolded(f, gc, gg);
    worst = std::max({worst, (u.node - oracle::node_unfold(cy, n, m)).norm(),
                      (u.layer - oracle::layer_unfold(cy, n, m)).norm()});
  }
  return {worst < 1e-10, fmt("max Frobenius deviation %.2e over 20 pairs", worst)};
}

std::map<std::string, double> method_means(const ExperimentConfig& c) {
  std::map<std::string, double> out;
  for (const auto& s : aggregate(run_experiment(c, threads()))) out[s.method] = s.mean;
  return out;
}

Outcome topology_point() {
  ExperimentConfig c;
  c.trials = 100;
  const auto low = method_means(c);
  c.gamma1 = 0.33;
  const auto high = method_means(c);
  const double nkd = low.at("nkd"), unf = low.at("unfold");
  const bool pass = std::abs(nkd - 0.695) <= 0.10 && std::abs(unf - 0.531) <= 0.10 && nkd > unf &&
                    high.at("unfold") > high.at("nkd");
  return {pass, fmt("g1=0.01 nkd %.3f unfold %.3f; g1=0.33 nkd %.3f unfold %.3f", nkd, unf,
                    high.at("nkd"), high.at("unfold"))};
}

Outcome centrality_point() {
  ExperimentConfig c = ExperimentConfig::for_metric(Metric::ErrorRate);
  c.n_list = {80};
  const auto inv = method_means(c);
  c.filter = FilterKind::ExpInteraction;
  c.tau_multiplier = 10.0;
  const auto ex = method_means(c);
  const double nkd = inv.at("nkd"), unf = inv.at("unfold");
  const bool pass = std::abs(nkd - 0.144) <= 0.10 && std::abs(unf - 0.547) <= 0.15 && nkd < unf &&
                    ex.at("nkd") <= 0.01 && ex.at("unfold") <= 0.01;
  return {pass, fmt("inv nkd %.3f unfold %.3f; exp nkd %.3f unfold %.3f", nkd, unf, ex.at("nkd"),
                    ex.at("unfold"))};
}

MatrixXd exact_template(const Graph& g) { return sym_evd(g.adj()).vectors; }

Outcome solver() {
  Rng rng(derive_seed(1, "acceptance-solver"));
  double gap = 0.0, viol = 0.0;
  for (int t = 0; t < 20; ++t) {
    const SpecTempProblem p{exact_template(gen_erdos_renyi(6, 0.5, rng)), 40.0, 1e-6};
    const SolveReport r = solve_spectemp(p);
    const auto ref = oracle::condat_vu(p.v, p.rho, p.eps, 1000000);
    gap = std::max(gap, std::abs(r.objective - ref.objective) / ref.objective);
    viol = std::max({viol, spectemp_violation(p, r.a_hat), ref.max_violation});
  }

  // Truth must satisfy A·1 >= 1, so isolated nodes are redrawn.
  int perfect = 0;
  for (int t = 0; t < 20; ++t) {
    Graph g = gen_erdos_renyi(10, 0.4, rng);
    while (g.degrees().minCoeff() < 1.0) g = gen_erdos_renyi(10, 0.4, rng);
    const SolveReport r = solve_spectemp({exact_template(g), 40.0, 1e-6});
    if (f1_score(binarize(r.a_hat), g.adj()) == 1.0) ++perfect;
  }
  const bool pass = gap < 1e-4 && viol < 1e-6 && perfect >= 19;
  return {pass, fmt("max relative gap %.2e, max violation %.2e, ER(10,0.4) F1=1 in %.0f/20", gap, viol,
                    perfect)};
}

Outcome hazard() {
  // Coupling spectrum {-1, 1, 2}, physical spectrum {0.9, 0, r, -0.8} with r
  // the root of e^{-2r} + e^{2r} + e^{4r} = 3, under e^{A^C ⊗ A^G}: the
  // node-unfolded covariance gets equal eigenvalues at 0 and r.
  double lo = -1.0, hi = -0.1;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::exp(-2 * mid) + std::exp(2 * mid) + std::exp(4 * mid) > 3.0 ? lo : hi) = mid;
  }
  Rng rng(derive_seed(1, "acceptance-hazard"));
  const Graph gc(oracle::with_spectrum((VectorXd(3) << -1, 1, 2).finished(), rng));
  const Graph gg(oracle::with_spectrum((VectorXd(4) << 0.9, 0.0, 0.5 * (lo + hi), -0.8).finished(), rng));
  const FilterSpec f = FilterSpec::exp_interaction(1.0, {0, 0, 1});
  const auto u = population_unfolded(f, gc, gg);
  const double gap = sym_evd(u.node).min_gap;
  const MatrixXd vg = sym_evd(gg.adj()).vectors;
  const double unfold = basis_match_score(estimate_unfold(u).vg, vg);
  const double nkd = basis_match_score(estimate_nkd(exact_covariance(f, gc, gg, 0.0).cy, 4, 3).vg, vg);
  return {gap < 1e-9 && unfold < 0.99 && nkd >= 1 - 1e-8,
          fmt("node eigengap %.2e, unfold score %.4f, nkd score 1-%.1e", gap, unfold, 1 - nkd)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "pgl_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string topo = "--name det --n 10,14 --s 100,1000 --trials 8";
  const std::string cen = "--name detc --metric error_rate --n 30 --s 300 --trials 8";
  std::vector<std::string> a, b;
  for (int t : {1, 2, 8}) {
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / ("r" + std::to_string(k) + "_" + std::to_string(t) + ".csv");
      const std::string cmd = std::string(PGL_CLI) + " experiment " + (k == 0 ? topo : cen) +
                              " --threads " + std::to_string(t) + " -o " + out.string();
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "experiment command failed"};
      (k == 0 ? a : b).push_back(slurp(out));
    }
  }
  const bool same = a[0] == a[1] && a[0] == a[2] && b[0] == b[1] && b[0] == b[2];
  const bool nonempty = std::count(a[0].begin(), a[0].end(), '\n') == 1 + 2 * 2 * 8 * 2;
  fs::remove_all(dir);
  return {same && nonempty, same ? "results identical at 1, 2 and 8 threads" : "results differ across thread counts"};
}

}  // namespace

int main() {
  int failed = 0;
  failed += !run(1, "exact recovery from the population covariance", 10, exact_recovery);
  failed += !run(2, "unfolded covariances match the selection-matrix expectation", 5, unfolding_oracle);
  failed += !run(3, "topology F1 reference point", 600, topology_point);
  failed += !run(4, "central-node error rate reference point", 900, centrality_point);
  failed += !run(5, "template solver correctness", 300, solver);
  failed += !run(6, "repeated-eigenvalue hazard", 5, hazard);
  failed += !run(7, "thread-count determinism", 600, determinism);
  std::printf("%d of 7 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
