#include "rmtlab/models.hpp"

#include <cmath>
#include <numbers>

#include "model_detail.hpp"
#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

constexpr double kUnitTol = 1e-10;
constexpr double kHermitianTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kSupportTol = 1e-12;
constexpr double kMinCoupling = 1e-14;
constexpr Complex kI{0.0, 1.0};

void require_unit(const Vector& x, const char* name) {
    if (x.size() == 0 || !x.allFinite() || std::abs(x.norm() - 1.0) > kUnitTol) {
        fail(ErrorKind::NonOrthonormal, std::string(name) + " must be a finite unit vector");
    }
}

void require_base(const ModelConfig& model, const Matrix& base) {
    require_square_finite(base);
    if (base.rows() != model.dimension()) {
        fail(ErrorKind::DimensionMismatch, "base matrix and perturbation vectors differ in size");
    }
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Additive: return "additive";
        case ModelKind::AntiHermitian: return "antihermitian";
        case ModelKind::Multiplicative: return "multiplicative";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "additive") return ModelKind::Additive;
    if (name == "antihermitian") return ModelKind::AntiHermitian;
    if (name == "multiplicative") return ModelKind::Multiplicative;
    fail(ErrorKind::InvalidConfig,
         "unknown model '" + name + "' (expected additive, antihermitian or multiplicative)");
}

ModelConfig ModelConfig::additive(Vector v, Vector w) {
    ModelConfig m{ModelKind::Additive, std::move(v), std::move(w), {}};
    m.validate();
    return m;
}

ModelConfig ModelConfig::anti_hermitian(Vector v) {
    ModelConfig m{ModelKind::AntiHermitian, std::move(v), {}, {}};
    m.validate();
    return m;
}

ModelConfig ModelConfig::multiplicative(Vector v, std::vector<Vector> extra) {
    ModelConfig m{ModelKind::Multiplicative, std::move(v), {}, std::move(extra)};
    m.validate();
    return m;
}

Matrix ModelConfig::frame() const {
    Matrix f(dimension(), rank());
    f.col(0) = v;
    for (std::size_t i = 0; i < extra_vectors.size(); ++i) f.col(static_cast<Index>(i) + 1) = extra_vectors[i];
    return f;
}

void ModelConfig::validate() const {
    require_unit(v, "v");
    if (kind == ModelKind::Additive) {
        if (w.size() != v.size()) fail(ErrorKind::DimensionMismatch, "w and v differ in size");
        require_unit(w, "w");
    }
    if (!extra_vectors.empty()) {
        if (kind != ModelKind::Multiplicative) {
            fail(ErrorKind::KindMismatch, "extra vectors are only meaningful for the multiplicative model");
        }
        for (const auto& x : extra_vectors) {
            if (x.size() != v.size()) fail(ErrorKind::DimensionMismatch, "extra vector size mismatch");
        }
        const Matrix f = frame();
        const double defect = (f.adjoint() * f - Matrix::Identity(rank(), rank())).cwiseAbs().maxCoeff();
        if (defect > kUnitTol) fail(ErrorKind::NonOrthonormal, "perturbation vectors are not orthonormal");
    }
}

namespace detail {

Matrix assemble(const ModelConfig& model, const Matrix& base, double t) {
    switch (model.kind) {
        case ModelKind::Additive:
            return base + t * model.v * model.w.adjoint();
        case ModelKind::AntiHermitian:
            return base + (kI * t) * model.v * model.v.adjoint();
        case ModelKind::Multiplicative: {
            const Matrix f = model.frame();
            return base - (1.0 - t) * (base * f) * f.adjoint();
        }
    }
    return base;
}

Matrix derivative(const ModelConfig& model, const Matrix& base) {
    switch (model.kind) {
        case ModelKind::Additive:
            return model.v * model.w.adjoint();
        case ModelKind::AntiHermitian:
            return kI * model.v * model.v.adjoint();
        case ModelKind::Multiplicative: {
            const Matrix f = model.frame();
            return (base * f) * f.adjoint();
        }
    }
    return Matrix::Zero(base.rows(), base.cols());
}

void check_base_kind(const ModelConfig& model, const Matrix& base) {
    require_base(model, base);
    if (model.kind == ModelKind::AntiHermitian && hermitian_defect(base) > kHermitianTol) {
        fail(ErrorKind::KindMismatch, "anti-Hermitian model requires a Hermitian base matrix");
    }
    if (model.kind == ModelKind::Multiplicative && unitary_defect(base) > kUnitaryTol) {
        fail(ErrorKind::KindMismatch, "multiplicative model requires a unitary base matrix");
    }
}

}  // namespace detail

Matrix build_matrix(const ModelConfig& model, const Matrix& base, double t) {
    model.validate();
    detail::check_base_kind(model, base);
    if (!std::isfinite(t)) fail(ErrorKind::TOutOfRange, "t must be finite");
    if (model.kind == ModelKind::Multiplicative && (t < -1.0 || t > 1.0)) {
        fail(ErrorKind::TOutOfRange, "multiplicative model requires t in [-1, 1]");
    }
    return detail::assemble(model, base, t);
}

Complex spectral_function(const ModelConfig& model, const Matrix& base, Complex z) {
    require_base(model, base);
    switch (model.kind) {
        case ModelKind::Additive:
            return resolvent_bilinear(base, z, model.v, model.w);
        case ModelKind::AntiHermitian:
            return -resolvent_bilinear(base, z, model.v, model.v);
        case ModelKind::Multiplicative: {
            Matrix a = -z * base.adjoint();
            a.diagonal().array() += 1.0;
            return bilinear_solve(a, model.v, model.v);
        }
    }
    return {};
}

Complex level_target(ModelKind kind, double t) {
    switch (kind) {
        case ModelKind::Additive:
            if (t == 0.0) fail(ErrorKind::DegenerateT, "level 1/t undefined at t = 0");
            return 1.0 / t;
        case ModelKind::AntiHermitian:
            if (t == 0.0) fail(ErrorKind::DegenerateT, "level i/t undefined at t = 0");
            return kI / t;
        case ModelKind::Multiplicative:
            if (t == 1.0) fail(ErrorKind::DegenerateT, "level 1/(1-t) undefined at t = 1");
            return 1.0 / (1.0 - t);
    }
    return {};
}

std::vector<Complex> series_coefficients(const ModelConfig& model, const Matrix& base, int count) {
    if (count < 1) fail(ErrorKind::InvalidArgument, "coefficient count must be >= 1");
    require_base(model, base);
    if (model.kind == ModelKind::AntiHermitian) {
        fail(ErrorKind::KindMismatch, "no series expansion is provided for the anti-Hermitian model");
    }
    std::vector<Complex> coefficients;
    coefficients.reserve(static_cast<std::size_t>(count));
    Vector x = model.v;
    const Vector& left = model.kind == ModelKind::Additive ? model.w : model.v;
    for (int k = 0; k < count; ++k) {
        coefficients.push_back(left.dot(x));
        if (k + 1 < count) {
            if (model.kind == ModelKind::Additive) {
                x = base * x;
            } else {
                x = base.adjoint() * x;
            }
        }
    }
    return coefficients;
}

Complex msc(Complex z) {
    const double re = std::abs(z.real());
    const double distance = re <= 2.0 ? std::abs(z.imag()) : std::hypot(re - 2.0, z.imag());
    if (!(distance > kSupportTol)) {
        fail(ErrorKind::OnSupport, "m_sc is undefined on the support [-2, 2]");
    }
    // Pick the larger root of m^2 + z m + 1 = 0 stably; the product of roots is 1.
    Complex s;
    if (std::abs(z) > 4.0) {
        s = z * std::sqrt(1.0 - 4.0 / (z * z));
    } else {
        s = std::sqrt(z * z - 4.0);
        if ((std::conj(z) * s).real() < 0.0) s = -s;
    }
    const Complex large_root = (-z - s) / 2.0;
    return 1.0 / large_root;
}

Prediction predicted_outlier(const ModelConfig& model, const Matrix& base, double t, Index n) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    switch (model.kind) {
        case ModelKind::Additive:
            if (!(std::abs(t) > 1.0)) fail(ErrorKind::RegimeViolation, "additive outlier needs |t| > 1");
            return {t, 1.0 / t, "single outlier near t (mu = t/sqrt(n) = " + std::to_string(t / sqrt_n) + ")"};
        case ModelKind::AntiHermitian:
            if (!(std::abs(t) > 1.0)) {
                fail(ErrorKind::RegimeViolation, "anti-Hermitian outlier needs |t| > 1");
            }
            return {kI * (t - 1.0 / t), kI / t, "outlier near i(t - 1/t), m_sc(z) = i/t"};
        case ModelKind::Multiplicative: {
            if (!(t != 0.0 && std::abs(t) < 1.0)) {
                fail(ErrorKind::RegimeViolation, "multiplicative outlier needs 0 < |t| < 1");
            }
            require_base(model, base);
            const Complex c1 = model.v.dot(base.adjoint() * model.v);
            if (std::abs(c1) < kMinCoupling) {
                fail(ErrorKind::DegenerateCoupling, "v^* U^* v vanishes; z_t undefined");
            }
            return {t / ((1.0 - t) * c1), 1.0 / (1.0 - t),
                    "zero of 1 + (v^*U^*v) z - 1/(1-t) (sqrt(n) t = " + std::to_string(sqrt_n * t) + ")"};
        }
    }
    return {};
}

namespace {

constexpr double kSeriesLimit = 20.0;

double i1_power_series(double x) {
    const double half = x / 2.0;
    const double half_sq = half * half;
    double term = half;  // k = 0
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= half_sq / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-x} I_1(x) ~ (2πx)^{-1/2} Σ_k (-1)^k a_k(1) / x^k, summed until the terms stop shrinking.
double i1_scaled_asymptotic(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (odd * odd - 4.0) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i1(double x) {
    if (x < 0.0 || std::isnan(x)) fail(ErrorKind::NegativeArgument, "I_1 requires x >= 0");
    if (x <= kSeriesLimit) return i1_power_series(x);
    return std::exp(x) * i1_scaled_asymptotic(x);
}

double bessel_i1_scaled(double x) {
    if (x < 0.0 || std::isnan(x)) fail(ErrorKind::NegativeArgument, "I_1 requires x >= 0");
    if (x <= kSeriesLimit) return std::exp(-x) * i1_power_series(x);
    return i1_scaled_asymptotic(x);
}

double expected_count(Index n, double t, double y) {
    if (n < 1 || !(t > 0.0) || !(y > 0.0) || !std::isfinite(t) || !std::isfinite(y)) {
        fail(ErrorKind::InvalidArgument, "expected_count needs n >= 1, t > 0, y > 0");
    }
    const double ny = static_cast<double>(n) * y;
    const double x = 2.0 * ny;
    // e^{-ny(t+1/t)} I_1(2ny) = e^{-ny(t + 1/t - 2)} · e^{-2ny} I_1(2ny); the exponent is <= 0.
    return std::exp(-ny * (t + 1.0 / t - 2.0)) * bessel_i1_scaled(x) / y;
}

Complex rank_d_condition(const Matrix& unitary, const Matrix& vectors, double t, Complex z) {
    require_square_finite(unitary);
    if (vectors.rows() != unitary.rows() || vectors.cols() < 1) {
        fail(ErrorKind::DimensionMismatch, "vectors must be an n x d frame");
    }
    const Index d = vectors.cols();
    if ((vectors.adjoint() * vectors - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kUnitTol) {
        fail(ErrorKind::NonOrthonormal, "perturbation vectors are not orthonormal");
    }
    if (!(std::abs(z) < 1.0)) fail(ErrorKind::PoleProximity, "condition is evaluated inside |z| < 1 only");

    Matrix a = -z * unitary.adjoint();
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    const Matrix x = lu.solve(vectors);
    if (!x.allFinite() || (a * x - vectors).norm() > 1e-8 * std::sqrt(static_cast<double>(d))) {
        fail(ErrorKind::PoleProximity, "I - zU^* is numerically singular");
    }
    const Matrix reduced = Matrix::Identity(d, d) - (1.0 - t) * (vectors.adjoint() * x);
    return determinant(reduced);
}

}  // namespace rmtlab
