#pragma once

#include <string>
#include <vector>

#include "pgl/signals.hpp"

namespace pgl {

/// N×M unfolding of an NM-vector: column m is layer block m, so that
/// reshape_vec(a ⊗ b) = b aᵀ.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> reshape_vec(
    const Eigen::MatrixBase<Derived>& v, Index n, Index m) {
  if (v.cols() != 1 || v.rows() != n * m)
    throw Error(ErrorKind::Shape, "reshape_vec: vector length is not N*M");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, m);
  for (Index l = 0; l < m; ++l) out.col(l) = v.segment(l * n, n);
  return out;
}

/// Van Loan rearrangement of an (m·n)×(p·q) matrix partitioned into n×q
/// blocks: row (i·m + k) is vec of block (k, i)ᵀ, so R(A ⊗ B) = vec(A) vec(B)ᵀ
/// for A m×p and B n×q.
MatrixXd rearrange(const MatrixXd& mat, Index m, Index n, Index p, Index q);

struct NkdResult {
  VectorXd factor_c;  // unit M-vector
  VectorXd factor_g;  // unit N-vector
  double alpha = 0.0;
  double residual = 0.0;  // distance of the unfolding to its best rank-1 fit
};

/// Nearest Kronecker factors v ≈ alpha·(factor_c ⊗ factor_g) from the top
/// singular triple of reshape_vec(v, n, m).
NkdResult nkd(const VectorXd& v, Index n, Index m);

struct BasisResult {
  MatrixXd basis;  // d×target, orthonormal columns
  Index accepted = 0;
  bool incomplete = false;
};

/// Gram-Schmidt over candidates in order, dropping any whose residual after
/// projection is <= tol. Missing directions are filled deterministically from
/// the canonical basis and flagged.
BasisResult gram_schmidt_dedup(const std::vector<VectorXd>& candidates, Index target,
                               double tol = 0.5);

enum class CandidateOrder { Residual, Eigenvalue };

struct NkdOptions {
  double gs_tol = 0.5;
  CandidateOrder order = CandidateOrder::Residual;
  bool skip_basis = false;  // stop after the per-eigenvector decompositions
};

struct SpectralEstimate {
  MatrixXd vc;  // M×M
  MatrixXd vg;  // N×N
  std::vector<NkdResult> per_vector;  // covariance-eigenvalue order
  MatrixXd cov_vectors;               // eigenvectors of the full covariance (nkd only)
  VectorXd cov_values;
  double min_eigengap = 0.0;
  bool vc_incomplete = false;
  bool vg_incomplete = false;
  std::vector<std::string> warnings;
};

constexpr double kEigengapWarning = 1e-6;

SpectralEstimate estimate_nkd(const MatrixXd& cov, Index n, Index m, const NkdOptions& opts = {});

/// Eigenbases of the layer-wise and node-wise unfolded covariances.
SpectralEstimate estimate_unfold(const UnfoldedCovariance& covs);
SpectralEstimate estimate_unfold(const CovarianceEstimate& covs);

/// Minimum matched |<v̂_i, v_j>| under a maximum-weight perfect matching of
/// estimate columns to truth columns.
double basis_match_score(const MatrixXd& estimate, const MatrixXd& truth);

}  // namespace pgl
