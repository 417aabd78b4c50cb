#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kmbias/io.hpp"

namespace kmbias {

struct PlotOptions {
    std::string title;
    std::string x_label = "time (multiples of ams)";
    std::string y_label = "survival probability";
    double x_min = 0.0;
    double x_max = 4.0;
    /// Position of the vertical guide (the actual median survival).
    double ams_guide = 1.0;
    /// Draw the S = 0.5 horizontal and t = ams vertical guide lines.
    bool show_guides = true;
    /// Curves with more step points than this are thinned (first and
    /// last point always kept) so the file stays small at n = 10^7.
    std::size_t max_vertices_per_curve = 2000;
};

/// Renders survival step functions as a standalone SVG document. The
/// output is a pure function of the inputs: same curves and options,
/// same bytes. Curve labels must be unique and non-empty. Throws
/// std::invalid_argument on empty input or bad options.
std::string render_survival_svg(const std::vector<PlotCurve>& curves,
                                const PlotOptions& options);

}  // namespace kmbias
