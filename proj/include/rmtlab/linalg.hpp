#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rmtlab {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

/// Eigenvalues together with biorthogonal right/left eigenvector families.
///
/// `rights` holds the columns R_j of P, `lefts` the rows L_j of P^{-1}, so that
/// M = P diag(values) P^{-1}. Each R_j has unit 2-norm and L_j R_j = 1.
struct EigenSystem {
    Vector values;
    Matrix rights;
    Matrix lefts;
    double basis_condition = 1.0;

    [[nodiscard]] Index size() const noexcept { return values.size(); }
};

/// Throws DimensionMismatch for non-square input and NonFinite for NaN/Inf entries.
void require_square_finite(const Matrix& m);

/// Full decomposition. Lefts come from inverting the right-eigenvector matrix.
/// Throws IllConditionedBasis when cond₁(P) exceeds 1e12.
EigenSystem eigen_decompose(const Matrix& m);

/// Eigenvalues only; cheaper than eigen_decompose for Monte Carlo sweeps.
Vector eigenvalues(const Matrix& m);

/// Ascending eigenvalues of a Hermitian matrix (lower triangle is read).
Eigen::VectorXd hermitian_eigenvalues(const Matrix& h);

/// w^* a^{-1} v via one pivoted LU solve. Throws PoleProximity when a is
/// numerically singular or the solve residual exceeds 1e-8 ‖v‖.
Complex bilinear_solve(const Matrix& a, const Vector& v, const Vector& w);

/// w^* (zI − M)^{-1} v.
Complex resolvent_bilinear(const Matrix& m, Complex z, const Vector& v, const Vector& w);

struct SylvesterPair {
    Complex lhs;  // det(I_n + AB)
    Complex rhs;  // det(I_d + BA)
};

SylvesterPair sylvester_check(const Matrix& a, const Matrix& b);

Complex determinant(const Matrix& m);

/// Largest |entry| of M − M^*, relative to max(1, max |entry|).
double hermitian_defect(const Matrix& m);

/// max |entry| of U^*U − I.
double unitary_defect(const Matrix& u);

/// Smallest pairwise distance; +inf for fewer than two points.
double min_pairwise_gap(std::span<const Complex> points);

std::vector<Complex> to_std(const Vector& v);

}  // namespace rmtlab
