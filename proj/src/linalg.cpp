#include "rmtlab/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

constexpr double kMaxBasisCondition = 1e12;
constexpr double kSolveResidualTol = 1e-8;
constexpr double kMinReciprocalCondition = 1e-14;

double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Runs zgeev on a copy of m. `vectors` is filled only when requested.
Vector run_zgeev(const Matrix& m, Matrix* vectors) {
    const auto n = static_cast<lapack_int>(m.rows());
    Matrix work = m;
    Vector values(n);
    const char jobvr = vectors != nullptr ? 'V' : 'N';
    if (vectors != nullptr) vectors->resize(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', jobvr, n, work.data(), n, values.data(), nullptr, 1,
        vectors != nullptr ? vectors->data() : nullptr, vectors != nullptr ? n : 1);
    if (info != 0) {
        fail(ErrorKind::IllConditionedBasis,
             "zgeev failed to converge (info=" + std::to_string(info) + ")");
    }
    return values;
}

}  // namespace

void require_square_finite(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorKind::DimensionMismatch,
             "expected a non-empty square matrix, got " + std::to_string(m.rows()) + "x" +
                 std::to_string(m.cols()));
    }
    if (!m.allFinite()) fail(ErrorKind::NonFinite, "matrix has NaN or Inf entries");
}

EigenSystem eigen_decompose(const Matrix& m) {
    require_square_finite(m);
    EigenSystem es;
    es.values = run_zgeev(m, &es.rights);

    Eigen::PartialPivLU<Matrix> lu(es.rights);
    es.lefts = lu.inverse();
    es.basis_condition = one_norm(es.rights) * one_norm(es.lefts);
    if (!std::isfinite(es.basis_condition) || es.basis_condition > kMaxBasisCondition) {
        fail(ErrorKind::IllConditionedBasis,
             "eigenvector basis condition " + std::to_string(es.basis_condition) +
                 " exceeds 1e12 (matrix numerically non-diagonalizable)");
    }
    for (Index j = 0; j < es.size(); ++j) {
        const Complex pairing = es.lefts.row(j) * es.rights.col(j);
        es.lefts.row(j) /= pairing;
    }
    return es;
}

Vector eigenvalues(const Matrix& m) {
    require_square_finite(m);
    return run_zgeev(m, nullptr);
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& h) {
    require_square_finite(h);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

Complex bilinear_solve(const Matrix& a, const Vector& v, const Vector& w) {
    if (a.rows() != v.size() || a.rows() != w.size()) {
        fail(ErrorKind::DimensionMismatch, "bilinear form operands have incompatible sizes");
    }
    Eigen::PartialPivLU<Matrix> lu(a);
    const Vector x = lu.solve(v);
    if (!x.allFinite() || lu.rcond() < kMinReciprocalCondition) {
        fail(ErrorKind::PoleProximity, "system is numerically singular");
    }
    const double residual = (a * x - v).norm();
    if (!(residual <= kSolveResidualTol * v.norm())) {
        fail(ErrorKind::PoleProximity,
             "solve residual " + std::to_string(residual) + " exceeds tolerance");
    }
    return w.dot(x);
}

Complex resolvent_bilinear(const Matrix& m, Complex z, const Vector& v, const Vector& w) {
    require_square_finite(m);
    Matrix shifted = -m;
    shifted.diagonal().array() += z;
    return bilinear_solve(shifted, v, w);
}

Complex determinant(const Matrix& m) {
    if (m.rows() != m.cols()) fail(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
    if (m.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Matrix>(m).determinant();
}

SylvesterPair sylvester_check(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        fail(ErrorKind::DimensionMismatch,
             "Sylvester operands must be n x d and d x n, got " + std::to_string(a.rows()) + "x" +
                 std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                 std::to_string(b.cols()));
    }
    const Index n = a.rows();
    const Index d = a.cols();
    return {determinant(Matrix::Identity(n, n) + a * b), determinant(Matrix::Identity(d, d) + b * a)};
}

double hermitian_defect(const Matrix& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double unitary_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double min_pairwise_gap(std::span<const Complex> points) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            gap = std::min(gap, std::abs(points[i] - points[j]));
        }
    }
    return gap;
}

std::vector<Complex> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace rmtlab
