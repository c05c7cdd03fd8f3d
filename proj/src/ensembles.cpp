#include "rmtlab/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_dimension(Index n) {
    if (n < 1) fail(ErrorKind::InvalidDimension, "dimension must be >= 1, got " + std::to_string(n));
}

Matrix phase_fixed_q(const Matrix& gaussian) {
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    const Index n = gaussian.rows();
    const Index d = gaussian.cols();
    Matrix q = qr.householderQ() * Matrix::Identity(n, d);
    for (Index k = 0; k < d; ++k) {
        const Complex r = qr.matrixQR()(k, k);
        const double mag = std::abs(r);
        if (mag > 0.0) q.col(k) *= r / mag;
    }
    return q;
}

}  // namespace

std::uint64_t SeedSpec::derived_seed() const noexcept {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ splitmix64(trial_index + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ splitmix64(stream + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

double Rng::uniform() {
    // 53 random bits mapped to (0, 1]; zero is excluded so log() is safe.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

Complex Rng::complex_normal(double variance) {
    // |z|^2 ~ Exp(variance), uniform phase.
    const double radius = std::sqrt(-variance * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return std::polar(radius, angle);
}

Matrix sample_ginibre(Index n, const SeedSpec& seed) {
    require_dimension(n);
    Rng rng(seed);
    Matrix g(n, n);
    const double variance = 1.0 / static_cast<double>(n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal(variance);
    }
    return g;
}

Matrix sample_gue(Index n, const SeedSpec& seed) {
    require_dimension(n);
    Rng rng(seed);
    Matrix h(n, n);
    const double variance = 1.0 / static_cast<double>(n);
    const double sd = std::sqrt(variance);
    for (Index j = 0; j < n; ++j) {
        h(j, j) = sd * rng.normal();
        for (Index i = j + 1; i < n; ++i) {
            h(i, j) = rng.complex_normal(variance);
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

Matrix sample_haar_unitary(Index n, const SeedSpec& seed) {
    require_dimension(n);
    return phase_fixed_q(sample_ginibre(n, seed));
}

Vector sample_unit_vector(Index n, const SeedSpec& seed) {
    require_dimension(n);
    Rng rng(seed);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v / v.norm();
}

Matrix sample_orthonormal_frame(Index n, Index d, const SeedSpec& seed) {
    require_dimension(n);
    if (d < 1 || d > n) fail(ErrorKind::InvalidDimension, "frame width must be in [1, n]");
    Rng rng(seed);
    Matrix g(n, d);
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
    }
    return phase_fixed_q(g);
}

double kostlan_expected_exceedances(Index n, double r) {
    require_dimension(n);
    const double x = static_cast<double>(n) * r * r;
    if (x <= 0.0) return static_cast<double>(n);
    // P(Γ_k > x) = Σ_{j<k} e^{-x} x^j / j!, accumulated in log space.
    const double log_x = std::log(x);
    double tail = 0.0;
    double total = 0.0;
    for (Index k = 1; k <= n; ++k) {
        const double j = static_cast<double>(k - 1);
        tail += std::exp(-x + j * log_x - std::lgamma(j + 1.0));
        total += std::min(tail, 1.0);
    }
    return total;
}

}  // namespace rmtlab
