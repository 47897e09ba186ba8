#pragma once

#include <vector>

#include "pgl/spectral.hpp"

namespace pgl {

/// min{‖x − x⁺‖, ‖x + (−x)⁺‖}: distance to the nearest one-signed vector.
/// Zero iff x is entrywise nonnegative or entrywise nonpositive.
template <typename Derived>
typename Derived::RealScalar positivity_score(const Eigen::MatrixBase<Derived>& x) {
  using Real = typename Derived::RealScalar;
  if (x.size() == 0 || x.isZero(Real(0)))
    throw Error(ErrorKind::Degenerate, "positivity_score: zero vector");
  const Real neg_part = x.cwiseMin(Real(0)).norm();  // ‖x − x⁺‖
  const Real pos_part = x.cwiseMax(Real(0)).norm();  // ‖x + (−x)⁺‖
  return std::min(neg_part, pos_part);
}

struct CentralityResult {
  VectorXd cg;  // physical-graph centrality, unit norm, nonnegative orientation
  VectorXd cc;  // coupling-graph centrality
  Index selected_index = 0;
  double pos_score = 0.0;
};

/// Picks the covariance eigenvector with the smallest positivity score
/// (lowest index on ties) and splits it into its Kronecker factors.
CentralityResult detect_centrality(const MatrixXd& cov_eigvecs, Index n, Index m);

/// Unfolding variant: the most one-signed eigenvector of the node-wise
/// covariance is taken as the physical centrality.
CentralityResult detect_centrality_unfold(const MatrixXd& node_eigvecs);

/// Indices of the k largest entries, ties to the lower index, returned in
/// ascending order.
std::vector<Index> topk(const VectorXd& c, Index k);

/// |detected \ truth| / |truth|.
double detection_error_rate(const std::vector<Index>& detected, const std::vector<Index>& truth);

}  // namespace pgl
