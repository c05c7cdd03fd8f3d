#pragma once

#include <string>

#include "rmtlab/trajectories.hpp"

namespace rmtlab::lab {

struct SvgOptions {
    int size_px = 800;
    int color_bands = 32;
    bool unit_circle = false;
    std::string title;
};

/// Eigenvalue paths as polylines in the complex plane, coloured blue → red along t.
std::string render_trajectories_svg(const TrajectoryBundle& bundle, const SvgOptions& options = {});

/// RGB colour for position f ∈ [0, 1] on the ramp, as "#rrggbb".
std::string ramp_color(double f);

}  // namespace rmtlab::lab
