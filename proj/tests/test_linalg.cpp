#include <catch_amalgamated.hpp>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/linalg.hpp"

using namespace rmtlab;
using Catch::Approx;
using namespace std::complex_literals;

namespace {

Vector basis(Index n, Index k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    return e;
}

// Index of the eigenvalue closest to z.
Index nearest(const Vector& values, Complex z) {
    Index best = 0;
    for (Index j = 1; j < values.size(); ++j)
        if (std::abs(values(j) - z) < std::abs(values(best) - z)) best = j;
    return best;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const LabError& e) {
        return e.kind();
    }
    FAIL("expected a LabError");
    return ErrorKind::IoFailure;
}

}  // namespace

TEST_CASE("diagonal matrix decomposes onto the standard basis", "[linalg][eigen]") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 2.0i;
    const auto es = eigen_decompose(m);
    for (Index k = 0; k < 2; ++k) {
        const Index j = nearest(es.values, m(k, k));
        CHECK(std::abs(es.values(j) - m(k, k)) < 1e-14);
        // R_j is e_k up to a phase, and L_j = R_j^*.
        CHECK(std::abs(std::abs(es.rights(k, j)) - 1.0) < 1e-14);
        CHECK((es.lefts.row(j) - es.rights.col(j).adjoint()).norm() < 1e-14);
    }
    CHECK(es.basis_condition == Approx(1.0).margin(1e-12));
}

TEST_CASE("upper triangular 2x2 eigenvectors match the hand computation", "[linalg][eigen]") {
    const Complex a{2.0, -0.5};
    Matrix m(2, 2);
    m << 0.0, a, 0.0, 1.0;
    const auto es = eigen_decompose(m);
    const Index j0 = nearest(es.values, 0.0);
    const Index j1 = nearest(es.values, 1.0);
    CHECK(std::abs(es.values(j0)) < 1e-14);
    CHECK(std::abs(es.values(j1) - 1.0) < 1e-14);

    // R_1 ∝ (1, 0), R_2 ∝ (a, 1).
    CHECK(std::abs(es.rights(1, j0)) < 1e-14);
    CHECK(std::abs(es.rights(0, j1) / es.rights(1, j1) - a) < 1e-12);
    // L_1 = (1, −a), L_2 = (0, 1) after rescaling to L_j R_j = 1; compare ratios and products.
    CHECK(std::abs(es.lefts(j0, 1) / es.lefts(j0, 0) + a) < 1e-12);
    CHECK(std::abs(es.lefts(j1, 0)) < 1e-14);
    CHECK(std::abs((es.lefts.row(j0) * es.rights.col(j0))(0) - 1.0) < 1e-14);
    CHECK(std::abs((es.lefts.row(j1) * es.rights.col(j1))(0) - 1.0) < 1e-14);
}

TEST_CASE("Ginibre decomposition reconstructs the matrix", "[linalg][eigen]") {
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        const Matrix g = sample_ginibre(5, {11, trial});
        const auto es = eigen_decompose(g);
        const Matrix rebuilt = es.rights * es.values.asDiagonal() * es.lefts;
        CHECK((rebuilt - g).norm() <= 1e-10 * g.norm());

        const Matrix bi = es.lefts * es.rights;
        CHECK((bi - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((es.rights * es.lefts - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
        for (Index j = 0; j < 5; ++j) {
            CHECK((g * es.rights.col(j) - es.values(j) * es.rights.col(j)).norm() < 1e-10 * g.norm());
            CHECK((es.lefts.row(j) * g - es.values(j) * es.lefts.row(j)).norm() <
                  1e-10 * g.norm() * es.lefts.row(j).norm());
            CHECK(es.rights.col(j).norm() == Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("overlap row sums equal one", "[linalg][eigen][property]") {
    const Matrix g = sample_ginibre(8, {3, 0});
    const auto es = eigen_decompose(g);
    const Matrix ll = es.lefts * es.lefts.adjoint();
    const Matrix rr = es.rights.adjoint() * es.rights;
    for (Index i = 0; i < 8; ++i) {
        Complex sum = 0.0;
        for (Index j = 0; j < 8; ++j) sum += ll(i, j) * rr(j, i);
        CHECK(std::abs(sum - 1.0) < 1e-8);
    }
}

TEST_CASE("decomposition rejects bad input", "[linalg][errors]") {
    Matrix jordan(2, 2);
    jordan << 1.0, 1.0, 0.0, 1.0;
    CHECK(kind_of([&] { eigen_decompose(jordan); }) == ErrorKind::IllConditionedBasis);

    Matrix bad = Matrix::Identity(3, 3);
    bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK(kind_of([&] { eigen_decompose(bad); }) == ErrorKind::NonFinite);
    CHECK(kind_of([&] { eigen_decompose(Matrix::Zero(2, 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("resolvent bilinear form on trivial inputs", "[linalg][resolvent]") {
    CHECK(std::abs(resolvent_bilinear(Matrix::Zero(2, 2), 1.0, basis(2, 0), basis(2, 0)) - 1.0) < 1e-15);

    Matrix one(1, 1);
    one(0, 0) = Complex{0.3, -1.2};
    const Complex z{2.0, 0.5};
    const Vector e = basis(1, 0);
    CHECK(std::abs(resolvent_bilinear(one, z, e, e) - 1.0 / (z - one(0, 0))) < 1e-15);
}

TEST_CASE("resolvent agrees with the eigen-expansion", "[linalg][resolvent]") {
    const Matrix m = sample_ginibre(6, {5, 1});
    const Vector v = sample_unit_vector(6, {5, 1, streams::v});
    const Vector w = sample_unit_vector(6, {5, 1, streams::w});
    const Complex z = 3.0;
    const auto es = eigen_decompose(m);
    Complex expansion = 0.0;
    for (Index j = 0; j < 6; ++j) {
        const Complex wr = (w.adjoint() * es.rights.col(j))(0);
        const Complex lv = (es.lefts.row(j) * v)(0);
        expansion += wr * lv / (z - es.values(j));
    }
    CHECK(std::abs(resolvent_bilinear(m, z, v, w) - expansion) < 1e-9);
}

TEST_CASE("Hermitian resolvent is real at real z", "[linalg][resolvent][property]") {
    const Matrix h = sample_gue(10, {9, 0});
    const Vector v = sample_unit_vector(10, {9, 0, streams::v});
    for (double z : {2.7, -3.1, 5.0}) {
        CHECK(std::abs(resolvent_bilinear(h, z, v, v).imag()) < 1e-10);
    }
}

TEST_CASE("resolvent refuses points on the spectrum", "[linalg][resolvent][errors]") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    const Vector v = Vector::Constant(3, 1.0 / std::sqrt(3.0));
    CHECK(kind_of([&] { resolvent_bilinear(d, 2.0, v, v); }) == ErrorKind::PoleProximity);
}

TEST_CASE("Sylvester determinant identity", "[linalg][sylvester]") {
    const Vector v = sample_unit_vector(5, {1, 0, streams::v});
    const Vector w = sample_unit_vector(5, {1, 0, streams::w});
    const double t = 1.7;
    const Matrix b = t * w.adjoint();
    const auto rank_one = sylvester_check(v, b);
    const Complex expected = 1.0 + t * w.dot(v);
    CHECK(std::abs(rank_one.lhs - expected) < 1e-12);
    CHECK(std::abs(rank_one.rhs - expected) < 1e-12);

    const auto zero = sylvester_check(Matrix::Zero(4, 2), Matrix::Zero(2, 4));
    CHECK(std::abs(zero.lhs - 1.0) < 1e-15);
    CHECK(std::abs(zero.rhs - 1.0) < 1e-15);

    const Matrix a = sample_ginibre(3, {2, 0}).leftCols(2);
    const Matrix bb = sample_ginibre(3, {2, 1}).topRows(2);
    const auto random = sylvester_check(a, bb);
    // Direct 3x3 and 2x2 determinants by cofactor expansion.
    const Matrix lhs_m = Matrix::Identity(3, 3) + a * bb;
    const Matrix rhs_m = Matrix::Identity(2, 2) + bb * a;
    const Complex det3 = lhs_m(0, 0) * (lhs_m(1, 1) * lhs_m(2, 2) - lhs_m(1, 2) * lhs_m(2, 1)) -
                         lhs_m(0, 1) * (lhs_m(1, 0) * lhs_m(2, 2) - lhs_m(1, 2) * lhs_m(2, 0)) +
                         lhs_m(0, 2) * (lhs_m(1, 0) * lhs_m(2, 1) - lhs_m(1, 1) * lhs_m(2, 0));
    const Complex det2 = rhs_m(0, 0) * rhs_m(1, 1) - rhs_m(0, 1) * rhs_m(1, 0);
    CHECK(std::abs(random.lhs - det3) < 1e-12);
    CHECK(std::abs(random.rhs - det2) < 1e-12);
    CHECK(std::abs(random.lhs - random.rhs) < 1e-12);

    CHECK(kind_of([&] { sylvester_check(Matrix::Zero(3, 2), Matrix::Zero(3, 3)); }) ==
          ErrorKind::DimensionMismatch);
}

TEST_CASE("matrix determinant lemma through the resolvent", "[linalg][sylvester][property]") {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        const Matrix m = sample_ginibre(5, {21, trial});
        const Vector v = sample_unit_vector(5, {21, trial, streams::v});
        const Vector w = sample_unit_vector(5, {21, trial, streams::w});
        const double t = 0.5 + 0.3 * static_cast<double>(trial);
        const Complex z{1.9, 0.4};
        const Matrix shifted = m - z * Matrix::Identity(5, 5);
        const Matrix inv = shifted.inverse();
        const Complex lhs = determinant(Matrix::Identity(5, 5) + inv * (t * v * w.adjoint()));
        const Complex rhs = 1.0 + t * (w.adjoint() * inv * v)(0);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("structural defects and gaps", "[linalg]") {
    const Matrix h = sample_gue(6, {4, 0});
    CHECK(hermitian_defect(h) == 0.0);
    CHECK(unitary_defect(sample_haar_unitary(6, {4, 0})) < 1e-12);
    const auto evs = hermitian_eigenvalues(h);
    for (Index k = 1; k < evs.size(); ++k) CHECK(evs(k) >= evs(k - 1));

    const std::vector<Complex> pts{0.0, 3.0, Complex{0.0, 0.25}};
    CHECK(min_pairwise_gap(pts) == Approx(0.25));
    CHECK(std::isinf(min_pairwise_gap(std::vector<Complex>{1.0})));
}
