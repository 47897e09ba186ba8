#include "pgl/centrality.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pgl {

namespace {

void orient_nonnegative(VectorXd& v) {
  v.normalize();
  if (v.sum() < 0.0) v = -v;
}

Index argmin_positivity(const MatrixXd& vecs, double& score) {
  Index best = 0;
  score = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < vecs.cols(); ++i) {
    const double p = positivity_score(vecs.col(i));
    if (p < score) {
      score = p;
      best = i;
    }
  }
  return best;
}

}  // namespace

CentralityResult detect_centrality(const MatrixXd& cov_eigvecs, Index n, Index m) {
  if (cov_eigvecs.rows() != n * m || cov_eigvecs.cols() < 1)
    throw Error(ErrorKind::Shape, "detect_centrality: eigenvectors must have N*M rows");
  CentralityResult out;
  out.selected_index = argmin_positivity(cov_eigvecs, out.pos_score);
  const NkdResult f = nkd(cov_eigvecs.col(out.selected_index), n, m);
  out.cg = f.factor_g;
  out.cc = f.factor_c;
  orient_nonnegative(out.cg);
  orient_nonnegative(out.cc);
  return out;
}

CentralityResult detect_centrality_unfold(const MatrixXd& node_eigvecs) {
  if (node_eigvecs.cols() < 1) throw Error(ErrorKind::Shape, "detect_centrality_unfold: no eigenvectors");
  CentralityResult out;
  out.selected_index = argmin_positivity(node_eigvecs, out.pos_score);
  out.cg = node_eigvecs.col(out.selected_index);
  orient_nonnegative(out.cg);
  return out;
}

std::vector<Index> topk(const VectorXd& c, Index k) {
  if (k < 0 || k > c.size()) throw Error(ErrorKind::InvalidArgument, "topk: k out of range");
  std::vector<Index> idx(static_cast<std::size_t>(c.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return c(a) > c(b); });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

double detection_error_rate(const std::vector<Index>& detected, const std::vector<Index>& truth) {
  if (detected.size() != truth.size() || truth.empty())
    throw Error(ErrorKind::InvalidArgument, "detection_error_rate: set sizes differ or are empty");
  const std::set<Index> t(truth.begin(), truth.end());
  const auto misses = std::count_if(detected.begin(), detected.end(),
                                    [&](Index i) { return t.count(i) == 0; });
  return static_cast<double>(misses) / static_cast<double>(truth.size());
}

}  // namespace pgl
