#include "pgl/topology.hpp"

#include <algorithm>

namespace pgl {

void SpecTempProblem::validate() const {
  if (v.rows() != v.cols() || v.rows() < 2)
    throw Error(ErrorKind::Shape, "spectral template must be square with d >= 2");
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "rho must be positive");
  if (!(eps >= 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be nonnegative");
  const double err = (v.transpose() * v - MatrixXd::Identity(v.cols(), v.cols())).norm();
  if (!(err <= 1e-8)) throw Error(ErrorKind::InvalidArgument, "spectral template is not orthonormal");
}

double spectemp_objective(const SpecTempProblem& p, const MatrixXd& a) {
  MatrixXd t = p.v.transpose() * a * p.v;
  t.diagonal().setZero();
  return a.cwiseAbs().sum() + 0.5 * p.rho * t.squaredNorm();
}

double spectemp_violation(const SpecTempProblem& p, const MatrixXd& a) {
  const double diag = (a.diagonal().cwiseAbs().array() - p.eps).maxCoeff();
  const double rows = (1.0 - a.rowwise().sum().array()).maxCoeff();
  return std::max({0.0, diag, rows});
}

namespace {

// Variables: strictly-upper entries (column-major over i < j) followed by
// the diagonal.
struct Layout {
  Index d;
  Index p;  // off-diagonal count
  std::vector<std::pair<Index, Index>> pairs;

  explicit Layout(Index dim) : d(dim), p(dim * (dim - 1) / 2) {
    for (Index j = 1; j < d; ++j)
      for (Index i = 0; i < j; ++i) pairs.emplace_back(i, j);
  }
  Index size() const { return p + d; }

  MatrixXd to_matrix(const VectorXd& x) const {
    MatrixXd a = MatrixXd::Zero(d, d);
    for (Index k = 0; k < p; ++k) {
      const auto [i, j] = pairs[static_cast<std::size_t>(k)];
      a(i, j) = a(j, i) = x(k);
    }
    a.diagonal() = x.tail(d);
    return a;
  }

  // Row sums of the symmetric matrix as a d×(p+d) operator.
  MatrixXd row_sum_operator() const {
    MatrixXd b = MatrixXd::Zero(d, size());
    for (Index k = 0; k < p; ++k) {
      const auto [i, j] = pairs[static_cast<std::size_t>(k)];
      b(i, k) = b(j, k) = 1.0;
    }
    b.rightCols(d).setIdentity();
    return b;
  }

  // Off-diagonal part of Vᵀ A(x) V, vectorized, as a d²×(p+d) operator.
  MatrixXd template_operator(const MatrixXd& v) const {
    MatrixXd g(d * d, size());
    for (Index k = 0; k < size(); ++k) {
      MatrixXd t;
      if (k < p) {
        const auto [i, j] = pairs[static_cast<std::size_t>(k)];
        t = v.row(i).transpose() * v.row(j);
        t += t.transpose().eval();
      } else {
        const Index i = k - p;
        t = v.row(i).transpose() * v.row(i);
      }
      t.diagonal().setZero();
      g.col(k) = Eigen::Map<const VectorXd>(t.data(), d * d);
    }
    return g;
  }
};

}  // namespace

SolveReport solve_spectemp(const SpecTempProblem& prob, const SolverOptions& opts) {
  prob.validate();
  const Layout lay(prob.v.rows());
  const Index n = lay.size();
  const Index d = lay.d;

  const MatrixXd g = lay.template_operator(prob.v);
  const MatrixXd quad = prob.rho * (g.transpose() * g);
  const MatrixXd b = lay.row_sum_operator();
  const MatrixXd btb = b.transpose() * b;

  VectorXd l1w(n);
  l1w.head(lay.p).setConstant(2.0);
  l1w.tail(d).setConstant(1.0);

  // Scaled ADMM on  q(x) + h(u) + I{s >= 1}  with  u = x,  s = Bx.
  double sigma = prob.rho;
  constexpr double relax = 1.6;
  Eigen::LLT<MatrixXd> kkt;
  auto factor = [&] {
    MatrixXd k = quad + sigma * btb;
    k.diagonal().array() += sigma;
    kkt.compute(k);
  };
  factor();

  VectorXd x = VectorXd::Zero(n), u = VectorXd::Zero(n), y1 = VectorXd::Zero(n);
  VectorXd s = VectorXd::Ones(d), y2 = VectorXd::Zero(d);

  SolveReport rep;
  for (int it = 1; it <= opts.max_iter; ++it) {
    x = kkt.solve(sigma * (u - y1) + sigma * b.transpose() * (s - y2));
    const VectorXd bx = b * x;
    const VectorXd xr = relax * x + (1.0 - relax) * u;
    const VectorXd bxr = relax * bx + (1.0 - relax) * s;

    VectorXd u_new = xr + y1;
    for (Index k = 0; k < n; ++k) {
      const double thr = l1w(k) / sigma;
      const double val = u_new(k);
      u_new(k) = val > thr ? val - thr : (val < -thr ? val + thr : 0.0);
    }
    u_new.tail(d) = u_new.tail(d).cwiseMax(-prob.eps).cwiseMin(prob.eps);
    const VectorXd s_new = (bxr + y2).cwiseMax(1.0);

    y1 += xr - u_new;
    y2 += bxr - s_new;

    const double primal = std::max({(x - u_new).lpNorm<Eigen::Infinity>(),
                                    (bx - s_new).lpNorm<Eigen::Infinity>(),
                                    (1.0 - (b * u_new).array()).cwiseMax(0.0).maxCoeff()});
    const double dual =
        sigma * ((u_new - u) + b.transpose() * (s_new - s)).lpNorm<Eigen::Infinity>();
    const double dual_scale = sigma * (y1 + b.transpose() * y2).lpNorm<Eigen::Infinity>();
    u = u_new;
    s = s_new;

    rep.iterations = it;
    rep.primal_residual = primal;
    rep.dual_residual = dual;
    if (primal <= opts.tol_abs && dual <= opts.tol_abs + opts.tol_rel * dual_scale) {
      rep.converged = true;
      break;
    }

    // Residual balancing; rescale the scaled duals with the penalty.
    if (it % 50 == 0) {
      const double ratio = primal / std::max(dual, 1e-300);
      double factor_change = 1.0;
      if (ratio > 10.0) factor_change = 2.0;
      else if (ratio < 0.1) factor_change = 0.5;
      if (factor_change != 1.0 && sigma * factor_change > 1e-6 && sigma * factor_change < 1e8) {
        sigma *= factor_change;
        y1 /= factor_change;
        y2 /= factor_change;
        factor();
      }
    }
  }

  rep.a_hat = lay.to_matrix(u);
  rep.lambda_hat = (prob.v.transpose() * rep.a_hat * prob.v).diagonal();
  rep.objective = spectemp_objective(prob, rep.a_hat);
  return rep;
}

Graph reconstruct_interaction(const MatrixXd& coupling, const MatrixXd& physical,
                              const Gamma& gamma) {
  return Graph(interaction_matrix(coupling, physical, gamma));
}

MatrixXd binarize(const MatrixXd& a, double thr_frac) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::Shape, "binarize: matrix is not square");
  if (!(thr_frac > 0.0 && thr_frac < 1.0))
    throw Error(ErrorKind::InvalidArgument, "binarize: threshold fraction must lie in (0, 1)");
  MatrixXd off = a.cwiseAbs();
  off.diagonal().setZero();
  const double top = off.size() ? off.maxCoeff() : 0.0;
  MatrixXd out = MatrixXd::Zero(a.rows(), a.cols());
  if (top == 0.0) return out;
  for (Index j = 1; j < a.cols(); ++j)
    for (Index i = 0; i < j; ++i)
      if (std::max(off(i, j), off(j, i)) > thr_frac * top) out(i, j) = out(j, i) = 1.0;
  return out;
}

MatrixXd edge_support(const MatrixXd& a) {
  MatrixXd out = (a.array() != 0.0).cast<double>();
  out.diagonal().setZero();
  return out;
}

double f1_score(const MatrixXd& estimated, const MatrixXd& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols() ||
      truth.rows() != truth.cols())
    throw Error(ErrorKind::Shape, "f1_score: shape mismatch");
  double tp = 0, fp = 0, fn = 0;
  for (Index j = 1; j < truth.cols(); ++j) {
    for (Index i = 0; i < j; ++i) {
      const bool e = estimated(i, j) != 0.0;
      const bool t = truth(i, j) != 0.0;
      tp += e && t;
      fp += e && !t;
      fn += !e && t;
    }
  }
  const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<ThresholdPoint> f1_threshold_sweep(const MatrixXd& estimate, const MatrixXd& truth,
                                               const std::vector<double>& thresholds) {
  std::vector<ThresholdPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back({t, f1_score(binarize(estimate, t), truth)});
  return out;
}

}  // namespace pgl
