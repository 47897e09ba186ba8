#include "pgl/graph.hpp"

#include <string>

namespace pgl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::InvalidPartition: return "invalid-partition";
    case ErrorKind::InvalidGamma: return "invalid-gamma";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Convergence: return "convergence";
  }
  return "unknown";
}

Graph::Graph(const MatrixXd& adj) {
  if (adj.rows() != adj.cols() || adj.rows() == 0)
    throw Error(ErrorKind::Shape, "graph adjacency must be square and nonempty");
  if (!adj.allFinite()) throw Error(ErrorKind::Numeric, "graph adjacency has non-finite entries");
  const double asym = (adj - adj.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, adj.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::InvalidArgument,
                "graph adjacency is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  adj_ = (adj + adj.transpose()) / 2.0;
}

Graph Graph::empty(Index n) { return Graph(MatrixXd::Zero(n, n)); }

Index Graph::edge_count() const {
  Index count = 0;
  for (Index j = 1; j < size(); ++j)
    for (Index i = 0; i < j; ++i)
      if (adj_(i, j) != 0.0) ++count;
  return count;
}

void Gamma::validate() const {
  if (!(g1 >= 0.0 && g2 >= 0.0 && g3 >= 0.0))
    throw Error(ErrorKind::InvalidGamma, "coupling parameters must be nonnegative");
  if (std::abs(g1 + g2 + g3 - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidGamma, "coupling parameters must sum to 1");
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Graph gen_erdos_renyi(Index n, double p, Rng& rng) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "erdos-renyi graph needs n >= 2");
  check_probability(p, "edge probability");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i)
      if (unif(rng) < p) a(i, j) = a(j, i) = 1.0;
  return Graph(a);
}

CorePeripheryGraph gen_core_periphery(Index n, Index core_size, double p_cp, double p_pp,
                                      Rng& rng) {
  if (core_size < 0 || core_size >= n)
    throw Error(ErrorKind::InvalidPartition, "core size must be smaller than the node count");
  check_probability(p_cp, "core-periphery probability");
  check_probability(p_pp, "periphery-periphery probability");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const bool ci = i < core_size;
      const bool cj = j < core_size;
      const double p = (ci && cj) ? 1.0 : (ci || cj) ? p_cp : p_pp;
      if (unif(rng) < p) a(i, j) = a(j, i) = 1.0;
    }
  }
  std::vector<Index> core(static_cast<std::size_t>(core_size));
  for (Index i = 0; i < core_size; ++i) core[static_cast<std::size_t>(i)] = i;
  return {Graph(a), std::move(core)};
}

Graph gen_path(Index n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "path graph needs n >= 2");
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  return Graph(a);
}

Graph gen_complete(Index n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "complete graph needs n >= 2");
  MatrixXd a = MatrixXd::Ones(n, n);
  a.diagonal().setZero();
  return Graph(a);
}

MatrixXd interaction_matrix(const MatrixXd& coupling, const MatrixXd& physical,
                            const Gamma& gamma) {
  gamma.validate();
  const Index m = coupling.rows();
  const Index n = physical.rows();
  MatrixXd out = gamma.g3 * kron(coupling, physical);
  for (Index b = 0; b < m; ++b) out.block(b * n, b * n, n, n) += gamma.g1 * physical;
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < m; ++c)
      out.block(r * n, c * n, n, n).diagonal().array() += gamma.g2 * coupling(r, c);
  return out;
}

Graph build_interaction(const InteractionGraphSpec& spec) {
  return Graph(interaction_matrix(spec.coupling.adj(), spec.physical.adj(), spec.gamma));
}

double max_degree_scale(const MatrixXd& adj) {
  if (adj.size() == 0) throw Error(ErrorKind::InvalidSize, "max_degree_scale: empty matrix");
  const double dmax = adj.rowwise().sum().maxCoeff();
  return dmax > 0.0 ? 1.0 / dmax : 1.0;
}

double max_degree_scale(const Graph& g) { return max_degree_scale(g.adj()); }

}  // namespace pgl
