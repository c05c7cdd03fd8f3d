#pragma once

#include "rmtlab/models.hpp"

// Unchecked helpers shared by the model and trajectory code; callers validate once.
namespace rmtlab::detail {

Matrix assemble(const ModelConfig& model, const Matrix& base, double t);

/// dG/dt, constant in t for every family.
Matrix derivative(const ModelConfig& model, const Matrix& base);

void check_base_kind(const ModelConfig& model, const Matrix& base);

}  // namespace rmtlab::detail
