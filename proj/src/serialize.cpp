#include "pgl/serialize.hpp"

#include <fstream>
#include <set>

namespace pgl {

void to_json(json& j, const Gamma& g) { j = json::array({g.g1, g.g2, g.g3}); }

void from_json(const json& j, Gamma& g) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parse, "gamma must be a 3-element array");
  g = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void to_json(json& j, const FilterSpec& f) {
  j = json{{"kind", to_string(f.kind)}};
  if (f.kind == FilterKind::ExpInteraction || f.kind == FilterKind::ResolventInteraction) {
    j["tau"] = f.tau;
    j["gamma"] = f.gamma;
  }
  if (f.kind == FilterKind::Poly) {
    json rows = json::array();
    for (Index i = 0; i < f.coeffs.rows(); ++i) {
      json row = json::array();
      for (Index c = 0; c < f.coeffs.cols(); ++c) row.push_back(f.coeffs(i, c));
      rows.push_back(std::move(row));
    }
    j["coeffs"] = std::move(rows);
  }
}

void from_json(const json& j, FilterSpec& f) {
  f = FilterSpec{};
  f.kind = filter_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("tau")) f.tau = j["tau"].get<double>();
  if (j.contains("gamma")) f.gamma = j["gamma"].get<Gamma>();
  if (j.contains("coeffs")) {
    const auto& rows = j["coeffs"];
    if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::Parse, "coeffs must be a nonempty 2-D array");
    const auto cols = rows[0].size();
    f.coeffs.resize(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw Error(ErrorKind::Parse, "coeffs rows are ragged");
      for (std::size_t c = 0; c < cols; ++c)
        f.coeffs(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c].get<double>();
    }
  }
  f.validate();
}

void to_json(json& j, const SolverOptions& o) {
  j = json{{"tol_abs", o.tol_abs}, {"tol_rel", o.tol_rel}, {"max_iter", o.max_iter}};
}

void from_json(const json& j, SolverOptions& o) {
  o = SolverOptions{};
  if (j.contains("tol_abs")) o.tol_abs = j["tol_abs"].get<double>();
  if (j.contains("tol_rel")) o.tol_rel = j["tol_rel"].get<double>();
  if (j.contains("max_iter")) o.max_iter = j["max_iter"].get<int>();
}

void to_json(json& j, const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  j = json{{"name", c.name},           {"gamma1", c.gamma1},
           {"filter", to_string(c.filter)}, {"tau_multiplier", c.tau_multiplier},
           {"n_list", c.n_list},       {"s_list", c.s_list},
           {"m", c.m},                 {"trials", c.trials},
           {"sigma2", c.sigma2},       {"seed", c.seed},
           {"methods", methods},       {"metric", to_string(c.metric)},
           {"exact_cov", c.exact_cov}, {"p_edge", c.p_edge},
           {"core_size", c.core_size}, {"p_cp", c.p_cp},
           {"p_pp", c.p_pp},           {"top_k", c.top_k},
           {"rho", c.rho},             {"eps", c.eps},
           {"thr_frac", c.thr_frac},   {"solver", c.solver}};
}

void from_json(const json& j, ExperimentConfig& c) {
  static const std::set<std::string> known{
      "name",   "gamma1",  "filter",    "tau_multiplier", "n_list", "s_list", "m",
      "trials", "sigma2",  "seed",      "methods",        "metric", "exact_cov", "p_edge",
      "core_size", "p_cp", "p_pp",      "top_k",          "rho",    "eps",    "thr_frac",
      "solver"};
  if (!j.is_object()) throw Error(ErrorKind::Parse, "experiment config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw Error(ErrorKind::Parse, "unknown experiment config key '" + key + "'");

  c = ExperimentConfig::for_metric(j.contains("metric") ? metric_from_string(j["metric"].get<std::string>())
                                                        : Metric::F1);
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("name", c.name);
  get("gamma1", c.gamma1);
  if (j.contains("filter")) c.filter = filter_kind_from_string(j["filter"].get<std::string>());
  get("tau_multiplier", c.tau_multiplier);
  get("n_list", c.n_list);
  get("s_list", c.s_list);
  get("m", c.m);
  get("trials", c.trials);
  get("sigma2", c.sigma2);
  get("seed", c.seed);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j["methods"]) c.methods.push_back(method_from_string(m.get<std::string>()));
  }
  get("exact_cov", c.exact_cov);
  get("p_edge", c.p_edge);
  get("core_size", c.core_size);
  get("p_cp", c.p_cp);
  get("p_pp", c.p_pp);
  get("top_k", c.top_k);
  get("rho", c.rho);
  get("eps", c.eps);
  get("thr_frac", c.thr_frac);
  if (j.contains("solver")) c.solver = j["solver"].get<SolverOptions>();
}

void to_json(json& j, const SolveReport& r) {
  std::vector<double> lambda(r.lambda_hat.data(), r.lambda_hat.data() + r.lambda_hat.size());
  j = json{{"objective", r.objective},
           {"primal_residual", r.primal_residual},
           {"dual_residual", r.dual_residual},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"lambda_hat", lambda}};
}

json spectral_diagnostics(const SpectralEstimate& e) {
  json residuals = json::array();
  json alphas = json::array();
  for (const auto& pv : e.per_vector) {
    residuals.push_back(pv.residual);
    alphas.push_back(pv.alpha);
  }
  return json{{"nkd_residuals", residuals},
              {"nkd_alphas", alphas},
              {"min_eigengap", e.min_eigengap},
              {"vc_incomplete", e.vc_incomplete},
              {"vg_incomplete", e.vg_incomplete},
              {"warnings", e.warnings}};
}

json centrality_json(const CentralityResult& c, const std::vector<Index>& top) {
  std::vector<Index> nodes;
  for (Index i : top) nodes.push_back(i + 1);
  return json{{"top_nodes", nodes},
              {"selected_index", c.selected_index + 1},
              {"pos_score", c.pos_score},
              {"cg", std::vector<double>(c.cg.data(), c.cg.data() + c.cg.size())},
              {"cc", std::vector<double>(c.cc.data(), c.cc.data() + c.cc.size())}};
}

void write_spectral_estimate(const SpectralEstimate& e, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (e.vc.size()) write_matrix_csv(e.vc, dir / "vc.csv");
  if (e.vg.size()) write_matrix_csv(e.vg, dir / "vg.csv");
  std::ofstream out(dir / "diagnostics.json");
  out << spectral_diagnostics(e).dump(2) << '\n';
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in).get<ExperimentConfig>();
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::Parse, path.string() + ": " + ex.what());
  }
}

}  // namespace pgl
