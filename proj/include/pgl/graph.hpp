#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "pgl/error.hpp"
#include "pgl/random.hpp"

namespace pgl {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Undirected weighted graph held as a dense symmetric adjacency matrix.
class Graph {
 public:
  /// Validates squareness, finiteness and symmetry (relative 1e-10), then
  /// stores the exactly symmetrized matrix.
  explicit Graph(const MatrixXd& adj);

  static Graph empty(Index n);

  Index size() const noexcept { return adj_.rows(); }
  const MatrixXd& adj() const noexcept { return adj_; }

  /// Number of nonzero strictly-upper entries.
  Index edge_count() const;
  VectorXd degrees() const { return adj_.rowwise().sum(); }

 private:
  MatrixXd adj_;
};

/// Coupling weights of the generalized product: Cartesian physical (g1),
/// Cartesian coupling (g2) and Kronecker (g3).
struct Gamma {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 1.0;

  /// The one-parameter family (g, 2g, 1 - 3g) used by the synthetic studies.
  static Gamma from_gamma1(double g) { return {g, 2.0 * g, 1.0 - 3.0 * g}; }

  void validate() const;
};

struct InteractionGraphSpec {
  Graph coupling;  // M nodes (layers)
  Graph physical;  // N nodes
  Gamma gamma;
};

template <typename Scalar>
struct BasicEigDecomp {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector values;   // descending
  Matrix vectors;  // orthonormal columns
  Scalar min_gap = std::numeric_limits<Scalar>::infinity();

  Index size() const noexcept { return values.size(); }
  bool nearly_degenerate(Scalar tol = Scalar(1e-6)) const { return min_gap < tol; }
};

using EigDecomp = BasicEigDecomp<double>;

/// Flip each column so its largest-magnitude entry is positive (first index
/// wins on ties).
template <typename Derived>
void normalize_column_signs(Eigen::MatrixBase<Derived>& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    Index arg = 0;
    typename Derived::RealScalar best = -1;
    for (Index r = 0; r < v.rows(); ++r) {
      const auto a = std::abs(v(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (v(arg, c) < 0) v.col(c) = -v.col(c);
  }
}

/// Symmetric eigendecomposition, eigenvalues in descending order.
template <typename Derived>
BasicEigDecomp<typename Derived::Scalar> sym_evd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Matrix = typename BasicEigDecomp<Scalar>::Matrix;
  if (m.rows() != m.cols()) throw Error(ErrorKind::Shape, "sym_evd: matrix is not square");
  if (!m.allFinite()) throw Error(ErrorKind::Numeric, "sym_evd: non-finite entries");

  const Matrix sym = (m + m.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "sym_evd: solver failed");

  const Index n = sym.rows();
  BasicEigDecomp<Scalar> out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  normalize_column_signs(out.vectors);
  for (Index i = 0; i + 1 < n; ++i)
    out.min_gap = std::min(out.min_gap, out.values(i) - out.values(i + 1));
  return out;
}

/// Dense Kronecker product a ⊗ b.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                        a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Graph gen_erdos_renyi(Index n, double p, Rng& rng);

struct CorePeripheryGraph {
  Graph graph;
  std::vector<Index> core;  // 0-based node ids 0..core_size-1
};

/// Core-core pairs always connected; core-periphery w.p. p_cp; periphery-
/// periphery w.p. p_pp.
CorePeripheryGraph gen_core_periphery(Index n, Index core_size, double p_cp, double p_pp,
                                      Rng& rng);

Graph gen_path(Index n);
Graph gen_complete(Index n);

/// A^I = g1 I⊗A^G + g2 A^C⊗I + g3 A^C⊗A^G. Node (m, i) sits at m*N + i.
Graph build_interaction(const InteractionGraphSpec& spec);

/// Same combination for raw (possibly learned, weighted) factor matrices.
MatrixXd interaction_matrix(const MatrixXd& coupling, const MatrixXd& physical,
                            const Gamma& gamma);

/// 1 / max row sum; 1 for a graph without edges.
double max_degree_scale(const Graph& g);
double max_degree_scale(const MatrixXd& adj);

// CSV persistence. Edge lists are 1-based upper-triangle `i,j,weight` with a
// leading `# n=<n>` comment; dense files hold one matrix row per line.
void write_edge_list(const Graph& g, const std::filesystem::path& path);
Graph read_edge_list(const std::filesystem::path& path);
void write_matrix_csv(const MatrixXd& m, const std::filesystem::path& path);
MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace pgl
