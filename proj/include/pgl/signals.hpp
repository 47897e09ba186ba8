#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>

#include "pgl/filters.hpp"

namespace pgl {

/// S observations of length N·M, one per row, stacked layer by layer: entry
/// m*N + i holds node i on layer m.
struct SignalBatch {
  Index n = 0;
  Index m = 0;
  MatrixXd samples;
  std::optional<std::uint64_t> seed;

  Index sample_count() const noexcept { return samples.rows(); }

  /// N×M unfolding of one observation; column m is layer block m.
  MatrixXd unfold(Index s) const;
  void validate() const;
};

struct CovarianceEstimate {
  MatrixXd full;   // NM×NM
  MatrixXd layer;  // M×M, E[YᵀY]
  MatrixXd node;   // N×N, E[YYᵀ]
  Index sample_count = 0;
};

struct UnfoldedCovariance {
  MatrixXd layer;
  MatrixXd node;
};

/// Zero-mean unit-variance scalar sampler for the excitation. synthesize
/// draws from its own copy, so stateful samplers are fine.
using WhiteSampler = std::function<double(Rng&)>;

WhiteSampler gaussian_sampler();

/// y = H x + w with x white and w ~ N(0, sigma2 I). Deterministic for a fixed
/// generator state.
SignalBatch synthesize(const FilterSpec& spec, const Graph& coupling, const Graph& physical,
                       Index s, double sigma2, Rng& rng,
                       const WhiteSampler& excitation = gaussian_sampler());

/// Second moments (no mean removal) of the batch and its two unfoldings.
CovarianceEstimate sample_covariances(const SignalBatch& batch);

/// Layer-wise and node-wise unfoldings of any NM×NM covariance: the node
/// matrix sums the diagonal N×N blocks, the layer matrix holds block traces.
UnfoldedCovariance unfold_covariance(const MatrixXd& full, Index n, Index m);

/// Closed-form noiseless unfolded covariances from the factor eigenpairs.
UnfoldedCovariance population_unfolded(const FilterSpec& spec, const Graph& coupling,
                                       const Graph& physical);

/// CSV with a `# N=<n> M=<m> S=<s>` header and one observation per row.
void write_batch(const SignalBatch& batch, const std::filesystem::path& path);
SignalBatch read_batch(const std::filesystem::path& path);

}  // namespace pgl
