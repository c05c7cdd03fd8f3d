#pragma once

#include "rmtlab/linalg.hpp"

namespace rmtlab {

/// O_ij = (L_i L_j^*)(R_j^* R_i), built from the Gram matrices L L^* and R^* R.
/// Throws BiorthogonalityViolated when max |L R − I| exceeds 1e-8.
Matrix overlap_matrix(const EigenSystem& es);

/// O_ii = ‖L_i‖² ‖R_i‖² without forming the full matrix.
Eigen::VectorXd overlap_diagonal(const EigenSystem& es);

}  // namespace rmtlab
