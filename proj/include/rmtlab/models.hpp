#pragma once

#include <string>
#include <vector>

#include "rmtlab/linalg.hpp"

namespace rmtlab {

enum class ModelKind {
    Additive,        // G + t v w^*
    AntiHermitian,   // H + i t v v^*
    Multiplicative,  // U (I - (1 - t) Σ v_i v_i^*)
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// One of the three rank-one families (rank-d for Multiplicative via extra_vectors).
struct ModelConfig {
    ModelKind kind = ModelKind::Additive;
    Vector v;
    Vector w;                            // Additive only
    std::vector<Vector> extra_vectors;   // Multiplicative rank-d only

    static ModelConfig additive(Vector v, Vector w);
    static ModelConfig anti_hermitian(Vector v);
    static ModelConfig multiplicative(Vector v, std::vector<Vector> extra = {});

    [[nodiscard]] Index dimension() const noexcept { return v.size(); }
    [[nodiscard]] Index rank() const noexcept { return 1 + static_cast<Index>(extra_vectors.size()); }

    /// n x rank matrix [v, extra_vectors...].
    [[nodiscard]] Matrix frame() const;

    /// Throws NonOrthonormal / DimensionMismatch when the vectors break the invariants.
    void validate() const;
};

struct Prediction {
    Complex location;
    Complex target;
    std::string regime_note;
};

/// G(t) for the configured family. Checks that `base` matches the kind
/// (Hermitian for AntiHermitian, unitary for Multiplicative) and that t ∈ [-1, 1]
/// for Multiplicative.
Matrix build_matrix(const ModelConfig& model, const Matrix& base, double t);

/// The characterization function whose level sets are Sp(G(t)):
///   Additive       w^*(zI - G)^{-1} v
///   AntiHermitian  v^*(H - zI)^{-1} v
///   Multiplicative v^*(I - zU^*)^{-1} v
Complex spectral_function(const ModelConfig& model, const Matrix& base, Complex z);

/// 1/t, i/t or 1/(1 - t).
Complex level_target(ModelKind kind, double t);

/// Additive: w^* G^k v; Multiplicative: v^*(U^*)^k v; k = 0..count-1.
std::vector<Complex> series_coefficients(const ModelConfig& model, const Matrix& base, int count);

/// Stieltjes transform of the semicircle law on [-2, 2]: the root of m^2 + z m + 1 = 0
/// with the smaller modulus.
Complex msc(Complex z);

Prediction predicted_outlier(const ModelConfig& model, const Matrix& base, double t, Index n);

/// Modified Bessel function I_1.
double bessel_i1(double x);

/// e^{-x} I_1(x), finite for all x >= 0.
double bessel_i1_scaled(double x);

/// Asymptotic mean number of eigenvalues of H + i t v v^* with Im λ > y:
/// (1/y) e^{-n y (t + 1/t)} I_1(2 n y).
double expected_count(Index n, double t, double y);

/// det(I_d - (1 - t) V^*(I - zU^*)^{-1} V): the d x d Sylvester reduction of
/// det(U A(t) - zI) = 0 for the rank-d multiplicative model.
Complex rank_d_condition(const Matrix& unitary, const Matrix& vectors, double t, Complex z);

}  // namespace rmtlab
