#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/lab/config.hpp"

namespace rmtlab::lab {

/// A base matrix with its perturbation vectors, drawn for one trial.
struct Instance {
    Matrix base;
    ModelConfig model;
};

/// Ginibre / GUE / Haar base by kind. v, w and the rank-d frame use separate streams,
/// so changing `w` or `rank` never changes the base draw.
Instance make_instance(ModelKind kind, Index n, const SeedSpec& seed, WMode w = WMode::Random, Index rank = 1);

struct RunSummary {
    std::vector<std::filesystem::path> files;
    std::string json;  // also written to <out>/<command>_summary.json
};

/// Subcommands: sample, trajectories, outlier, gaf, overlaps.
/// Throws InvalidConfig for an unknown command or unusable parameters.
RunSummary run_experiment(const std::string& command, const ExperimentConfig& config);

const std::vector<std::string>& experiment_commands();

}  // namespace rmtlab::lab
