#include "pgl/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pgl {

MatrixXd rearrange(const MatrixXd& mat, Index m, Index n, Index p, Index q) {
  if (m < 1 || n < 1 || p < 1 || q < 1 || mat.rows() != m * n || mat.cols() != p * q)
    throw Error(ErrorKind::Shape, "rearrange: matrix is not (m*n)x(p*q)");
  MatrixXd out(m * p, n * q);
  for (Index i = 0; i < p; ++i) {
    for (Index k = 0; k < m; ++k) {
      const MatrixXd block = mat.block(k * n, i * q, n, q);
      out.row(i * m + k) = Eigen::Map<const VectorXd>(block.data(), n * q).transpose();
    }
  }
  return out;
}

NkdResult nkd(const VectorXd& v, Index n, Index m) {
  if (v.size() != n * m) throw Error(ErrorKind::Shape, "nkd: vector length is not N*M");
  if (!v.allFinite()) throw Error(ErrorKind::Numeric, "nkd: non-finite input");
  if (v.norm() == 0.0) throw Error(ErrorKind::Degenerate, "nkd: zero vector");

  const MatrixXd r = reshape_vec(v, n, m);
  Eigen::JacobiSVD<MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();

  NkdResult out;
  out.factor_g = svd.matrixU().col(0);
  out.factor_c = svd.matrixV().col(0);
  out.alpha = s(0);
  out.residual = s.size() > 1 ? s.tail(s.size() - 1).norm() : 0.0;

  Index arg = 0;
  out.factor_g.cwiseAbs().maxCoeff(&arg);
  if (out.factor_g(arg) < 0) {
    out.factor_g = -out.factor_g;
    out.factor_c = -out.factor_c;
  }
  return out;
}

BasisResult gram_schmidt_dedup(const std::vector<VectorXd>& candidates, Index target,
                               double tol) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidArgument, "gram_schmidt_dedup: no candidates");
  const Index d = candidates.front().size();
  if (target < 1 || target > d)
    throw Error(ErrorKind::InvalidArgument, "gram_schmidt_dedup: target must lie in [1, d]");

  BasisResult out;
  out.basis = MatrixXd::Zero(d, target);
  Index k = 0;

  // Two passes of classical projection keep the accepted set orthonormal.
  auto project = [&](VectorXd r) {
    for (int pass = 0; pass < 2; ++pass)
      r -= out.basis.leftCols(k) * (out.basis.leftCols(k).transpose() * r);
    return r;
  };

  for (const VectorXd& c : candidates) {
    if (k == target) break;
    if (c.size() != d) throw Error(ErrorKind::Shape, "gram_schmidt_dedup: candidate size mismatch");
    const VectorXd r = project(c);
    const double norm = r.norm();
    if (norm > tol) out.basis.col(k++) = r / norm;
  }
  out.accepted = k;
  out.incomplete = k < target;

  while (k < target) {
    double best_norm = -1.0;
    VectorXd best_r;
    for (Index e = 0; e < d; ++e) {
      const VectorXd r = project(VectorXd::Unit(d, e));
      if (r.norm() > best_norm + 1e-12) {
        best_norm = r.norm();
        best_r = r;
      }
    }
    out.basis.col(k++) = best_r / best_norm;
  }
  return out;
}

namespace {

std::vector<std::size_t> candidate_order(const std::vector<NkdResult>& pv, CandidateOrder order) {
  std::vector<std::size_t> idx(pv.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (order == CandidateOrder::Residual)
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return pv[a].residual < pv[b].residual; });
  return idx;
}

std::string gap_warning(const char* what, double gap) {
  std::ostringstream os;
  os << what << " eigengap " << gap << " below " << kEigengapWarning
     << "; eigenvectors are not identifiable";
  return os.str();
}

}  // namespace

SpectralEstimate estimate_nkd(const MatrixXd& cov, Index n, Index m, const NkdOptions& opts) {
  if (cov.rows() != n * m || cov.cols() != n * m)
    throw Error(ErrorKind::Shape, "estimate_nkd: covariance is not NM×NM");
  const EigDecomp evd = sym_evd(cov);

  SpectralEstimate est;
  est.cov_values = evd.values;
  est.cov_vectors = evd.vectors;
  est.min_eigengap = evd.min_gap;
  if (evd.nearly_degenerate(kEigengapWarning)) est.warnings.push_back(gap_warning("covariance", evd.min_gap));

  est.per_vector.reserve(static_cast<std::size_t>(n * m));
  for (Index i = 0; i < n * m; ++i) est.per_vector.push_back(nkd(evd.vectors.col(i), n, m));
  if (opts.skip_basis) return est;

  std::vector<VectorXd> cand_c;
  std::vector<VectorXd> cand_g;
  for (std::size_t i : candidate_order(est.per_vector, opts.order)) {
    cand_c.push_back(est.per_vector[i].factor_c);
    cand_g.push_back(est.per_vector[i].factor_g);
  }
  auto bc = gram_schmidt_dedup(cand_c, m, opts.gs_tol);
  auto bg = gram_schmidt_dedup(cand_g, n, opts.gs_tol);
  est.vc = std::move(bc.basis);
  est.vg = std::move(bg.basis);
  est.vc_incomplete = bc.incomplete;
  est.vg_incomplete = bg.incomplete;
  if (bc.incomplete) est.warnings.push_back("coupling basis incomplete after deduplication");
  if (bg.incomplete) est.warnings.push_back("physical basis incomplete after deduplication");
  return est;
}

SpectralEstimate estimate_unfold(const UnfoldedCovariance& covs) {
  const EigDecomp el = sym_evd(covs.layer);
  const EigDecomp en = sym_evd(covs.node);
  SpectralEstimate est;
  est.vc = el.vectors;
  est.vg = en.vectors;
  est.min_eigengap = std::min(el.min_gap, en.min_gap);
  if (el.nearly_degenerate(kEigengapWarning)) est.warnings.push_back(gap_warning("layer covariance", el.min_gap));
  if (en.nearly_degenerate(kEigengapWarning)) est.warnings.push_back(gap_warning("node covariance", en.min_gap));
  return est;
}

SpectralEstimate estimate_unfold(const CovarianceEstimate& covs) {
  return estimate_unfold(UnfoldedCovariance{covs.layer, covs.node});
}

namespace {

// Hungarian algorithm (potentials form) for a square minimum-cost assignment.
// Returns row_of[col].
std::vector<Index> min_cost_assignment(const MatrixXd& cost) {
  const Index n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> row_of(n);
  for (Index j = 1; j <= n; ++j) row_of[j - 1] = p[j] - 1;
  return row_of;
}

}  // namespace

double basis_match_score(const MatrixXd& estimate, const MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols() ||
      estimate.rows() != estimate.cols())
    throw Error(ErrorKind::Shape, "basis_match_score: bases must be square and equally sized");
  const MatrixXd weights = (estimate.transpose() * truth).cwiseAbs();
  const auto row_of = min_cost_assignment(-weights);
  double score = 1.0;
  for (Index j = 0; j < weights.cols(); ++j) score = std::min(score, weights(row_of[j], j));
  return std::min(score, 1.0);
}

}  // namespace pgl
