#pragma once

#include <span>
#include <vector>

#include "rmtlab/models.hpp"

namespace rmtlab {

/// Eigenvalue paths over a (possibly refined) parameter grid.
/// paths[j][k] is the position of path j at grid[k].
struct TrajectoryBundle {
    std::vector<double> grid;
    std::vector<std::vector<Complex>> paths;
    double min_gap = 0.0;
    int refinements = 0;

    [[nodiscard]] Index path_count() const noexcept { return static_cast<Index>(paths.size()); }
    [[nodiscard]] std::vector<Complex> cross_section(std::size_t k) const;
};

/// Follows Sp(G(t)) from t_start to t_end. The interval is split into
/// `initial_steps` equal steps; a step is bisected (up to 20 levels) until every
/// point moves by at most half the distance from its destination to the nearest
/// other eigenvalue. Consecutive spectra are paired by optimal assignment.
TrajectoryBundle track(const ModelConfig& model, const Matrix& base, double t_start, double t_end,
                       int initial_steps);

/// Permutation p minimizing Σ |prev[i] − next[p[i]]|. Ties are resolved by
/// ordering both sets lexicographically by (Re, Im) before assignment.
std::vector<Index> match_sets(std::span<const Complex> prev, std::span<const Complex> next);

/// Eigenvalues of G(t) with their velocities λ_j'(t) = L_j (dG/dt) R_j, index-aligned.
struct PhasePoint {
    std::vector<Complex> positions;
    std::vector<Complex> velocities;
};

PhasePoint phase_point(const ModelConfig& model, const Matrix& base, double t);

std::vector<Complex> velocities_at(const ModelConfig& model, const Matrix& base, double t);

/// Velocities at the unperturbed point: t = 0 for Additive/AntiHermitian, t = 1 for Multiplicative.
std::vector<Complex> initial_velocities(const ModelConfig& model, const Matrix& base);

struct OdeResidual {
    std::vector<std::size_t> grid_index;          // interior points with equal spacing on both sides
    std::vector<std::vector<double>> residuals;  // [path][point]
};

/// Relative residual |λ'' − 2λ' Σ λ_k'/(λ_j − λ_k)| / (|lhs| + |rhs| + 1e-12)
/// using central differences. Throws GapTooSmall when min_gap ≤ 10 × spacing.
OdeResidual ode_residual(const TrajectoryBundle& bundle);

/// Classical RK4 on the second-order system; the last step is shortened to land on t_end.
/// Throws CollisionAbort when two positions come within 1e-6, when one step moves a
/// path by more than half the smallest gap, or when the state stops being finite.
TrajectoryBundle integrate_ode(std::span<const Complex> positions, std::span<const Complex> velocities,
                               double t_start, double t_end, double step);

struct LargeTLimits {
    std::vector<Complex> limits;  // n − 1 finite limit points
    Complex escape_rate;          // the remaining eigenvalue behaves like escape_rate · t
};

/// Additive: zeros of Σ_j c_j/(z − λ_j), c_j = (w^*R_j)(L_j v).
/// AntiHermitian: spectrum of H compressed to v^⊥ (real, interlacing Sp(H)).
LargeTLimits large_t_limits(const ModelConfig& model, const Matrix& base);

}  // namespace rmtlab
