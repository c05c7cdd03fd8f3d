#pragma once

#include <cstdint>
#include <random>

#include "rmtlab/linalg.hpp"

namespace rmtlab {

/// Identifies one independent random stream.
///
/// Streams are keyed by (master_seed, trial_index, stream); the derived 64-bit
/// seed is a SplitMix64 hash chain over the three fields, so trials can be
/// generated in any order or concurrently. `stream` separates the several draws
/// a single trial needs (base matrix, v, w, ...).
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
    std::uint64_t stream = 0;

    [[nodiscard]] SeedSpec with_stream(std::uint64_t s) const { return {master_seed, trial_index, s}; }
    [[nodiscard]] std::uint64_t derived_seed() const noexcept;
};

/// Well-known stream labels used by the experiment drivers.
namespace streams {
inline constexpr std::uint64_t base = 0;
inline constexpr std::uint64_t v = 1;
inline constexpr std::uint64_t w = 2;
inline constexpr std::uint64_t extra = 3;
inline constexpr std::uint64_t gaf = 4;
}  // namespace streams

/// mt19937_64 with portable uniform and Gaussian conversions (Box–Muller), so
/// identical seeds give identical bits on every conforming platform.
class Rng {
public:
    explicit Rng(const SeedSpec& seed) : engine_(seed.derived_seed()) {}

    /// Uniform on (0, 1].
    double uniform();
    double normal();
    /// Complex Gaussian with E|z|^2 = variance and independent real/imaginary parts.
    Complex complex_normal(double variance = 1.0);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// i.i.d. entries N_C(0, 1/n).
Matrix sample_ginibre(Index n, const SeedSpec& seed);

/// Hermitian; off-diagonal entries N_C(0, 1/n), diagonal N(0, 1/n). Semicircle on [-2, 2].
Matrix sample_gue(Index n, const SeedSpec& seed);

/// Haar unitary: QR of a Ginibre draw with the R diagonal rephased to be positive.
Matrix sample_haar_unitary(Index n, const SeedSpec& seed);

/// Uniform on the complex unit sphere.
Vector sample_unit_vector(Index n, const SeedSpec& seed);

/// n x d matrix with orthonormal columns, uniformly distributed (Gram–Schmidt of Gaussians).
Matrix sample_orthonormal_frame(Index n, Index d, const SeedSpec& seed);

/// Kostlan: n|λ|^2 over a Ginibre spectrum is distributed as independent Γ(k,1), k = 1..n,
/// so E #{|λ| > r} = Σ_k P(Γ_k > n r^2).
double kostlan_expected_exceedances(Index n, double r);

}  // namespace rmtlab
