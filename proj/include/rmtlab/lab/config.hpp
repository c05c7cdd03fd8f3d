#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmtlab/models.hpp"

namespace rmtlab::lab {

/// Parameter specification. Accepted text forms:
///   "2.5"                 single value
///   "a:b:steps"           steps + 1 equally spaced values from a to b
///   "mu_sqrt_n:μ"         t = μ √n
///   "mu_over_sqrt_n:μ"    t = μ / √n
///   "n_pow:p" "n_pow:p:c" t = c · n^p (c defaults to 1)
struct TSpec {
    enum class Kind { Single, Range, MuSqrtN, MuOverSqrtN, NPow };
    Kind kind = Kind::Single;
    double a = 0.0;
    double b = 0.0;
    int steps = 0;
    double coefficient = 1.0;

    static TSpec parse(const std::string& text);
    [[nodiscard]] std::vector<double> resolve(Index n) const;
    [[nodiscard]] std::string to_string() const;
};

enum class WMode { SameAsV, Random };

struct ExperimentConfig {
    ModelKind model = ModelKind::Additive;
    Index n = 100;
    TSpec t = TSpec::parse("2");
    int trials = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "rmtlab_out";
    double epsilon = 0.3;
    bool svg = false;
    WMode w = WMode::Random;
    Index rank = 1;
    double radius = 0.9;  // gaf: disk radius
    double level = 0.0;   // gaf: level c in g − c

    /// Throws InvalidConfig when a field is out of range for the chosen model.
    void validate() const;
};

/// Reads the JSON keys model, n, t, trials, seed, out, epsilon, svg, w, rank, radius, level.
/// Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
std::string config_to_json(const ExperimentConfig& config);

/// RMT_LAB_SEED, if set. Throws InvalidConfig when it is set but not an unsigned integer.
std::optional<std::uint64_t> seed_from_env();

}  // namespace rmtlab::lab
