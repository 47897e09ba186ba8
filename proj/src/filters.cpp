#include "pgl/filters.hpp"

#include <algorithm>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

namespace pgl {

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::Poly: return "poly";
    case FilterKind::ExpInteraction: return "exp";
    case FilterKind::ResolventInteraction: return "inv";
    case FilterKind::FJKronecker: return "fj";
    case FilterKind::DiffusionCartesian: return "diffusion";
  }
  return "unknown";
}

FilterKind filter_kind_from_string(const std::string& name) {
  if (name == "poly") return FilterKind::Poly;
  if (name == "exp") return FilterKind::ExpInteraction;
  if (name == "inv") return FilterKind::ResolventInteraction;
  if (name == "fj") return FilterKind::FJKronecker;
  if (name == "diffusion") return FilterKind::DiffusionCartesian;
  throw Error(ErrorKind::InvalidArgument, "unknown filter kind '" + name + "'");
}

FilterSpec FilterSpec::poly(MatrixXd coeffs) {
  FilterSpec f;
  f.kind = FilterKind::Poly;
  f.coeffs = std::move(coeffs);
  return f;
}

FilterSpec FilterSpec::exp_interaction(double tau, Gamma gamma) {
  FilterSpec f;
  f.kind = FilterKind::ExpInteraction;
  f.tau = tau;
  f.gamma = gamma;
  return f;
}

FilterSpec FilterSpec::resolvent_interaction(double tau, Gamma gamma) {
  FilterSpec f = exp_interaction(tau, gamma);
  f.kind = FilterKind::ResolventInteraction;
  return f;
}

FilterSpec FilterSpec::fj_kronecker() {
  FilterSpec f;
  f.kind = FilterKind::FJKronecker;
  return f;
}

FilterSpec FilterSpec::diffusion_cartesian() {
  FilterSpec f;
  f.kind = FilterKind::DiffusionCartesian;
  return f;
}

void FilterSpec::validate() const {
  switch (kind) {
    case FilterKind::Poly:
      if (coeffs.size() == 0) throw Error(ErrorKind::InvalidArgument, "poly filter has no coefficients");
      if (!coeffs.allFinite()) throw Error(ErrorKind::Numeric, "poly filter has non-finite coefficients");
      break;
    case FilterKind::ExpInteraction:
    case FilterKind::ResolventInteraction:
      if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorKind::InvalidArgument, "filter scale tau must be positive");
      gamma.validate();
      break;
    case FilterKind::FJKronecker:
    case FilterKind::DiffusionCartesian:
      break;
  }
}

namespace {

double poly_response(const MatrixXd& h, double lam_c, double lam_g) {
  // Horner in λ^G over rows, in λ^C within each row.
  double acc = 0.0;
  for (Index i = h.rows() - 1; i >= 0; --i) {
    double row = 0.0;
    for (Index j = h.cols() - 1; j >= 0; --j) row = row * lam_c + h(i, j);
    acc = acc * lam_g + row;
  }
  return acc;
}

double resolvent_denominator(double arg, double lam_c, double lam_g) {
  const double den = 1.0 - arg;
  if (std::abs(den) < 1e-12) {
    std::ostringstream os;
    os << "filter pole at eigenvalue pair (" << lam_c << ", " << lam_g << ")";
    throw Error(ErrorKind::Pole, os.str());
  }
  return den;
}

void check_dims(const Graph& coupling, const Graph& physical, Index len) {
  if (coupling.size() * physical.size() != len)
    throw Error(ErrorKind::Shape, "signal length does not match N*M");
}

void check_radius(const FilterSpec& spec, const Graph& coupling, const Graph& physical) {
  if (spec.kind != FilterKind::ResolventInteraction && spec.kind != FilterKind::FJKronecker &&
      spec.kind != FilterKind::DiffusionCartesian)
    return;
  const double radius =
      resolvent_radius(spec, sym_evd(coupling.adj()).values, sym_evd(physical.adj()).values);
  if (radius >= 1.0) {
    std::ostringstream os;
    os << to_string(spec.kind) << " filter is unstable: spectral radius " << radius << " >= 1";
    throw Error(ErrorKind::Instability, os.str());
  }
}

// Operator inverted by the resolvent kinds.
MatrixXd resolvent_argument(const FilterSpec& spec, const Graph& coupling, const Graph& physical) {
  const MatrixXd& ac = coupling.adj();
  const MatrixXd& ag = physical.adj();
  switch (spec.kind) {
    case FilterKind::ResolventInteraction:
      return spec.tau * interaction_matrix(ac, ag, spec.gamma);
    case FilterKind::FJKronecker:
      return kron(ac, ag);
    case FilterKind::DiffusionCartesian:
      return interaction_matrix(ac, ag, Gamma{1.0, 0.0, 0.0}) +
             interaction_matrix(ac, ag, Gamma{0.0, 1.0, 0.0});
    default:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "not a resolvent filter");
}

}  // namespace

double resolvent_radius(const FilterSpec& spec, const VectorXd& lam_c, const VectorXd& lam_g) {
  double radius = 0.0;
  for (Index i = 0; i < lam_c.size(); ++i) {
    for (Index j = 0; j < lam_g.size(); ++j) {
      double arg = 0.0;
      switch (spec.kind) {
        case FilterKind::ResolventInteraction:
          arg = spec.tau * interaction_eigenvalue(spec.gamma, lam_c(i), lam_g(j));
          break;
        case FilterKind::FJKronecker: arg = lam_c(i) * lam_g(j); break;
        case FilterKind::DiffusionCartesian: arg = lam_c(i) + lam_g(j); break;
        default: return 0.0;
      }
      radius = std::max(radius, std::abs(arg));
    }
  }
  return radius;
}

FrequencyResponse freq_response(const FilterSpec& spec, const VectorXd& lam_c,
                                const VectorXd& lam_g) {
  spec.validate();
  const Index m = lam_c.size();
  const Index n = lam_g.size();
  FrequencyResponse out;
  out.values.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double lc = lam_c(i);
      const double lg = lam_g(j);
      double h = 0.0;
      switch (spec.kind) {
        case FilterKind::Poly: h = poly_response(spec.coeffs, lc, lg); break;
        case FilterKind::ExpInteraction:
          h = std::exp(spec.tau * interaction_eigenvalue(spec.gamma, lc, lg));
          break;
        case FilterKind::ResolventInteraction:
          h = 1.0 / resolvent_denominator(spec.tau * interaction_eigenvalue(spec.gamma, lc, lg), lc, lg);
          break;
        case FilterKind::FJKronecker: h = 1.0 / resolvent_denominator(lc * lg, lc, lg); break;
        case FilterKind::DiffusionCartesian: h = 1.0 / resolvent_denominator(lc + lg, lc, lg); break;
      }
      out.values(i, j) = h;
    }
  }
  if (!out.values.allFinite()) throw Error(ErrorKind::Numeric, "frequency response is not finite");

  std::vector<double> mags(static_cast<std::size_t>(out.values.size()));
  for (Index k = 0; k < out.values.size(); ++k)
    mags[static_cast<std::size_t>(k)] = std::abs(out.values.data()[k]);
  std::sort(mags.begin(), mags.end());
  out.min_magnitude_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < mags.size(); ++k)
    out.min_magnitude_gap = std::min(out.min_magnitude_gap, mags[k] - mags[k - 1]);
  out.distinct_magnitudes = out.min_magnitude_gap > 1e-9;
  return out;
}

VectorXd apply_filter(const FilterSpec& spec, const Graph& coupling, const Graph& physical,
                      const VectorXd& x) {
  spec.validate();
  check_dims(coupling, physical, x.size());
  const Index n = physical.size();
  const Index m = coupling.size();

  if (spec.kind == FilterKind::Poly) {
    // (A^C)^j ⊗ (A^G)^i x = vec((A^G)^i X (A^C)^j) with X the N×M unfolding.
    const Eigen::Map<const MatrixXd> x_mat(x.data(), n, m);
    MatrixXd y = MatrixXd::Zero(n, m);
    MatrixXd g_pow = x_mat;
    for (Index i = 0; i < spec.coeffs.rows(); ++i) {
      if (i > 0) g_pow = physical.adj() * g_pow;
      MatrixXd gc_pow = g_pow;
      for (Index j = 0; j < spec.coeffs.cols(); ++j) {
        if (j > 0) gc_pow = gc_pow * coupling.adj();
        if (spec.coeffs(i, j) != 0.0) y += spec.coeffs(i, j) * gc_pow;
      }
    }
    return Eigen::Map<const VectorXd>(y.data(), y.size());
  }
  if (spec.kind == FilterKind::ExpInteraction)
    return filter_matrix(spec, coupling, physical) * x;

  check_radius(spec, coupling, physical);
  const MatrixXd op =
      MatrixXd::Identity(n * m, n * m) - resolvent_argument(spec, coupling, physical);
  return op.partialPivLu().solve(x);
}

MatrixXd filter_matrix(const FilterSpec& spec, const Graph& coupling, const Graph& physical) {
  spec.validate();
  const Index nm = coupling.size() * physical.size();
  switch (spec.kind) {
    case FilterKind::Poly: {
      MatrixXd h = MatrixXd::Zero(nm, nm);
      MatrixXd g_pow = MatrixXd::Identity(physical.size(), physical.size());
      for (Index i = 0; i < spec.coeffs.rows(); ++i) {
        if (i > 0) g_pow = g_pow * physical.adj();
        MatrixXd c_pow = MatrixXd::Identity(coupling.size(), coupling.size());
        for (Index j = 0; j < spec.coeffs.cols(); ++j) {
          if (j > 0) c_pow = c_pow * coupling.adj();
          if (spec.coeffs(i, j) != 0.0) h += spec.coeffs(i, j) * kron(c_pow, g_pow);
        }
      }
      return h;
    }
    case FilterKind::ExpInteraction: {
      const MatrixXd arg =
          spec.tau * interaction_matrix(coupling.adj(), physical.adj(), spec.gamma);
      return arg.exp();
    }
    default: {
      check_radius(spec, coupling, physical);
      const MatrixXd op = MatrixXd::Identity(nm, nm) - resolvent_argument(spec, coupling, physical);
      return op.partialPivLu().inverse();
    }
  }
}

ExactCovariance exact_covariance(const FilterSpec& spec, const Graph& coupling,
                                 const Graph& physical, double sigma2) {
  if (!(sigma2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise variance must be >= 0");
  const EigDecomp ec = sym_evd(coupling.adj());
  const EigDecomp eg = sym_evd(physical.adj());
  const FrequencyResponse fr = freq_response(spec, ec.values, eg.values);

  const Index nm = coupling.size() * physical.size();
  // Row-major flattening of the M×N response matches kron(V^C, V^G) columns.
  const MatrixXd resp_t = fr.values.transpose();
  const VectorXd power = Eigen::Map<const VectorXd>(resp_t.data(), nm).array().square();
  const MatrixXd basis = kron(ec.vectors, eg.vectors);
  ExactCovariance out;
  out.sigma2 = sigma2;
  out.cy = basis * power.asDiagonal() * basis.transpose();
  out.cy = (out.cy + out.cy.transpose()) / 2.0;
  out.cy.diagonal().array() += sigma2;
  return out;
}

VectorXd fj_equilibrium(const Graph& coupling, const Graph& physical, const VectorXd& x) {
  return apply_filter(FilterSpec::fj_kronecker(), coupling, physical, x);
}

VectorXd diffusion_equilibrium(const Graph& coupling, const Graph& physical, const VectorXd& x) {
  return apply_filter(FilterSpec::diffusion_cartesian(), coupling, physical, x);
}

}  // namespace pgl
