#pragma once

#include <vector>

#include "pgl/graph.hpp"

namespace pgl {

/// min ‖vec(A)‖₁ + (rho/2)‖A − V Diag(λ) Vᵀ‖²_F
/// s.t. |diag(A)| <= eps, A·1 >= 1, A = Aᵀ.
struct SpecTempProblem {
  MatrixXd v;  // orthonormal template
  double rho = 40.0;
  double eps = 1e-6;

  void validate() const;
};

struct SolverOptions {
  double tol_abs = 1e-7;
  double tol_rel = 1e-5;
  int max_iter = 50000;
};

struct SolveReport {
  MatrixXd a_hat;
  VectorXd lambda_hat;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Objective with λ at its closed-form minimizer λ_i = v_iᵀ A v_i.
double spectemp_objective(const SpecTempProblem& p, const MatrixXd& a);

/// Largest violation of the diagonal bound and row-sum constraints.
double spectemp_violation(const SpecTempProblem& p, const MatrixXd& a);

/// ADMM on the reduced problem (λ eliminated). Deterministic; starts from
/// A = 0. Returns converged = false at the iteration cap.
SolveReport solve_spectemp(const SpecTempProblem& p, const SolverOptions& opts = {});

/// Product-graph assembly of learned factor matrices with known coupling.
Graph reconstruct_interaction(const MatrixXd& coupling, const MatrixXd& physical,
                              const Gamma& gamma);

/// Edge (i, j), i < j, kept iff |a_ij| > thr_frac · max off-diagonal |a|.
MatrixXd binarize(const MatrixXd& a, double thr_frac = 0.3);

/// 0/1 pattern of the nonzero off-diagonal entries.
MatrixXd edge_support(const MatrixXd& a);

/// F1 over unordered off-diagonal pairs; 0 when precision and recall are
/// both zero or undefined.
double f1_score(const MatrixXd& estimated, const MatrixXd& truth);

struct ThresholdPoint {
  double thr_frac;
  double f1;
};

/// F1 of binarize(estimate, t) against truth for each t.
std::vector<ThresholdPoint> f1_threshold_sweep(const MatrixXd& estimate, const MatrixXd& truth,
                                               const std::vector<double>& thresholds);

}  // namespace pgl
