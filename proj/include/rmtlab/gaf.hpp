#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rmtlab/ensembles.hpp"

namespace rmtlab {

/// Truncated Gaussian power series g(z) = Σ_{k<K} g_k z^k.
struct GafSample {
    std::vector<Complex> coefficients;

    [[nodiscard]] Index truncation() const noexcept { return static_cast<Index>(coefficients.size()); }
    [[nodiscard]] Complex evaluate(Complex z) const;
    /// Coefficients of z·g(z).
    [[nodiscard]] GafSample shifted() const;
};

/// i.i.d. standard complex Gaussian coefficients. Throws InvalidTruncation for K < 2.
GafSample sample_gaf(Index truncation, const SeedSpec& seed);

/// Smallest K with r^K / (1 − r) ≤ 1e-6.
Index minimum_truncation(double r);

/// Zeros of g − c in |z| ≤ r from companion-matrix eigenvalues, checked against
/// argument_principle_count (CountMismatch on disagreement).
std::vector<Complex> gaf_zeros(const GafSample& gaf, Complex c, double r);

/// Winding number of g − c along |z| = r: trapezoid rule on `points` nodes, with
/// any step whose phase jump exceeds π/4 subdivided.
int argument_principle_count(const GafSample& gaf, Complex c, double r, int points = 4096);

struct AnnulusComparison {
    double inner = 0.0;
    double outer = 0.0;
    double mean_a = 0.0;
    double stderr_a = 0.0;
    double mean_b = 0.0;
    double stderr_b = 0.0;
    double z_score = 0.0;
};

/// Per-annulus (inner ≤ |z| < outer) mean counts and the two-sample z-score.
/// Throws InsufficientTrials when either side has fewer than 100 sets.
std::vector<AnnulusComparison> compare_clouds(std::span<const std::vector<Complex>> sample_a,
                                              std::span<const std::vector<Complex>> sample_b,
                                              std::span<const std::pair<double, double>> annuli);

}  // namespace rmtlab
