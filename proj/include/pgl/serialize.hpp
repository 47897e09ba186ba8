#pragma once

// JSON (nlohmann) conversions for the configuration and report types.

#include <filesystem>
#include <json.hpp>

#include "pgl/experiment.hpp"

namespace pgl {

using json = nlohmann::json;

void to_json(json& j, const Gamma& g);
void from_json(const json& j, Gamma& g);

/// {"kind": "...", "tau": t, "gamma": [g1, g2, g3], "coeffs": [[...], ...]}
void to_json(json& j, const FilterSpec& f);
void from_json(const json& j, FilterSpec& f);

void to_json(json& j, const SolverOptions& o);
void from_json(const json& j, SolverOptions& o);

/// Unknown keys are rejected so that typos in configs fail loudly.
void to_json(json& j, const ExperimentConfig& c);
void from_json(const json& j, ExperimentConfig& c);

void to_json(json& j, const SolveReport& r);

/// Diagnostics only (residuals, eigengaps, flags); matrices go to CSV.
json spectral_diagnostics(const SpectralEstimate& e);

/// Node ids are reported 1-based.
json centrality_json(const CentralityResult& c, const std::vector<Index>& top);

/// Writes vc.csv, vg.csv and diagnostics.json into dir.
void write_spectral_estimate(const SpectralEstimate& e, const std::filesystem::path& dir);

ExperimentConfig read_experiment_config(const std::filesystem::path& path);

}  // namespace pgl
