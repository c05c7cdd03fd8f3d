#include "rmtlab/overlaps.hpp"

#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

void require_biorthogonal(const EigenSystem& es) {
    const Index n = es.size();
    if (es.rights.rows() != n || es.rights.cols() != n || es.lefts.rows() != n || es.lefts.cols() != n) {
        fail(ErrorKind::DimensionMismatch, "eigen system blocks have inconsistent shapes");
    }
    const double defect = (es.lefts * es.rights - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-8)) {
        fail(ErrorKind::BiorthogonalityViolated, "max |LR - I| = " + std::to_string(defect));
    }
}

}  // namespace

Matrix overlap_matrix(const EigenSystem& es) {
    require_biorthogonal(es);
    const Matrix gl = es.lefts * es.lefts.adjoint();
    const Matrix gr = es.rights.adjoint() * es.rights;
    return gl.cwiseProduct(gr.transpose());
}

Eigen::VectorXd overlap_diagonal(const EigenSystem& es) {
    require_biorthogonal(es);
    return es.lefts.rowwise().squaredNorm().cwiseProduct(es.rights.colwise().squaredNorm().transpose());
}

}  // namespace rmtlab
