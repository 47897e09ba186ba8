#pragma once

#include <string>

#include "pgl/graph.hpp"

namespace pgl {

enum class FilterKind {
  Poly,                  // explicit coefficients h_ij
  ExpInteraction,        // exp(tau A^I)
  ResolventInteraction,  // (I - tau A^I)^-1
  FJKronecker,           // (I - A^C⊗A^G)^-1, Friedkin-Johnsen equilibrium
  DiffusionCartesian,    // (I - A^C⊗I - I⊗A^G)^-1, multiplex diffusion equilibrium
};

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& name);

/// Bivariate graph filter H(A^C, A^G) = sum_ij h_ij (A^C)^j ⊗ (A^G)^i.
struct FilterSpec {
  FilterKind kind = FilterKind::Poly;
  // Row i multiplies (A^G)^i, column j multiplies (A^C)^j.
  MatrixXd coeffs;
  double tau = 1.0;
  Gamma gamma;

  static FilterSpec poly(MatrixXd coeffs);
  static FilterSpec exp_interaction(double tau, Gamma gamma);
  static FilterSpec resolvent_interaction(double tau, Gamma gamma);
  static FilterSpec fj_kronecker();
  static FilterSpec diffusion_cartesian();

  void validate() const;
};

struct FrequencyResponse {
  MatrixXd values;  // M×N, entry (i, j) = h(λ^C_i, λ^G_j)
  bool distinct_magnitudes = true;
  double min_magnitude_gap = 0.0;
};

/// Scalar response at every eigenvalue pair. Pole check for the resolvent
/// kinds is 1e-12.
FrequencyResponse freq_response(const FilterSpec& spec, const VectorXd& lam_c,
                                const VectorXd& lam_g);

/// Interaction-graph eigenvalue γ1 λ^G + γ2 λ^C + γ3 λ^C λ^G.
inline double interaction_eigenvalue(const Gamma& g, double lam_c, double lam_g) {
  return g.g1 * lam_g + g.g2 * lam_c + g.g3 * lam_c * lam_g;
}

/// H·x. Polynomial filters never form H; the closed-form kinds materialize
/// the NM×NM operator. Throws Instability when a resolvent argument has
/// spectral radius >= 1.
VectorXd apply_filter(const FilterSpec& spec, const Graph& coupling, const Graph& physical,
                      const VectorXd& x);

/// Dense NM×NM filter operator.
MatrixXd filter_matrix(const FilterSpec& spec, const Graph& coupling, const Graph& physical);

/// Spectral radius of the matrix inverted by a resolvent kind; 0 for the
/// others.
double resolvent_radius(const FilterSpec& spec, const VectorXd& lam_c, const VectorXd& lam_g);

struct ExactCovariance {
  MatrixXd cy;
  double sigma2 = 0.0;
};

/// Population covariance (V^C⊗V^G)|H(Λ^C, Λ^G)|²(V^C⊗V^G)ᵀ + σ²I for white
/// excitation.
ExactCovariance exact_covariance(const FilterSpec& spec, const Graph& coupling,
                                 const Graph& physical, double sigma2);

VectorXd fj_equilibrium(const Graph& coupling, const Graph& physical, const VectorXd& x);
VectorXd diffusion_equilibrium(const Graph& coupling, const Graph& physical, const VectorXd& x);

}  // namespace pgl
