#include "rmtlab/lab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace rmtlab::lab {

std::string ramp_color(double f) {
    static constexpr std::array<std::array<double, 3>, 3> stops{{{44, 123, 182}, {255, 255, 153}, {215, 25, 28}}};
    f = std::clamp(f, 0.0, 1.0);
    const double x = f * 2.0;
    const auto i = static_cast<std::size_t>(std::min(1.0, std::floor(x)));
    const double u = x - static_cast<double>(i);
    std::array<int, 3> rgb{};
    for (std::size_t c = 0; c < 3; ++c) {
        rgb[c] = static_cast<int>(std::lround(stops[i][c] + u * (stops[i + 1][c] - stops[i][c])));
    }
    return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

std::string render_trajectories_svg(const TrajectoryBundle& bundle, const SvgOptions& options) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& path : bundle.paths) {
        for (const Complex z : path) {
            xmin = std::min(xmin, z.real());
            xmax = std::max(xmax, z.real());
            ymin = std::min(ymin, z.imag());
            ymax = std::max(ymax, z.imag());
        }
    }
    if (options.unit_circle) {
        xmin = std::min(xmin, -1.0);
        xmax = std::max(xmax, 1.0);
        ymin = std::min(ymin, -1.0);
        ymax = std::max(ymax, 1.0);
    }
    if (!std::isfinite(xmin)) xmin = ymin = -1.0, xmax = ymax = 1.0;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12}) * 1.08;
    const double cx = 0.5 * (xmin + xmax);
    const double cy = 0.5 * (ymin + ymax);
    const double size = options.size_px;
    const double scale = size / span;
    auto px = [&](double x) { return (x - cx) * scale + size / 2; };
    auto py = [&](double y) { return size / 2 - (y - cy) * scale; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        options.size_px);
    if (!options.title.empty()) svg += fmt::format("<title>{}</title>\n", options.title);
    svg += fmt::format("<line x1=\"0\" y1=\"{0:.2f}\" x2=\"{1}\" y2=\"{0:.2f}\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
                       py(0.0), options.size_px);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"0\" x2=\"{0:.2f}\" y2=\"{1}\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
                       px(0.0), options.size_px);
    if (options.unit_circle) {
        svg += fmt::format(
            "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n",
            px(0.0), py(0.0), scale);
    }

    const std::size_t points = bundle.grid.size();
    if (points >= 2) {
        const double t0 = bundle.grid.front();
        const double t1 = bundle.grid.back();
        const int bands = std::max(1, options.color_bands);
        auto band_of = [&](std::size_t k) {
            const double f = t1 == t0 ? 0.0 : (bundle.grid[k] - t0) / (t1 - t0);
            return std::min(bands - 1, static_cast<int>(f * bands));
        };
        for (const auto& path : bundle.paths) {
            std::size_t start = 0;
            while (start + 1 < points) {
                const int band = band_of(start);
                std::size_t end = start + 1;
                while (end + 1 < points && band_of(end) == band) ++end;
                std::string coords;
                for (std::size_t k = start; k <= end; ++k) {
                    coords += fmt::format("{:.2f},{:.2f} ", px(path[k].real()), py(path[k].imag()));
                }
                svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                                   ramp_color((band + 0.5) / bands), coords);
                start = end;
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace rmtlab::lab
