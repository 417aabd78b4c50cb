#include "kmbias/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace kmbias {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 46.0;
constexpr double kMarginBottom = 58.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string xml_escape(const std::string& text) {
    std::string escaped;
    escaped.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': escaped += "&amp;"; break;
            case '<': escaped += "&lt;"; break;
            case '>': escaped += "&gt;"; break;
            case '"': escaped += "&quot;"; break;
            case '\'': escaped += "&apos;"; break;
            default: escaped += c;
        }
    }
    return escaped;
}

// Fixed two-decimal coordinates keep the byte output independent of
// locale and double-formatting quirks.
std::string coord(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

std::string tick_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return buffer;
}

}  // namespace

std::string render_survival_svg(const std::vector<PlotCurve>& curves,
                                const PlotOptions& options) {
    if (curves.empty()) {
        throw std::invalid_argument("plot needs at least one curve");
    }
    if (!(options.x_min >= 0.0) || !(options.x_max > options.x_min)) {
        throw std::invalid_argument("plot range requires 0 <= x_min < x_max");
    }
    if (options.max_vertices_per_curve < 2) {
        throw std::invalid_argument("max vertices per curve must be at least 2");
    }
    std::set<std::string> labels;
    for (const PlotCurve& curve : curves) {
        if (curve.label.empty()) {
            throw std::invalid_argument("every curve needs a non-empty label");
        }
        if (!labels.insert(curve.label).second) {
            throw std::invalid_argument("duplicate curve label '" + curve.label + "'");
        }
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double t) {
        return kMarginLeft + (t - options.x_min) / (options.x_max - options.x_min) * plot_w;
    };
    const auto py = [&](double s) { return kMarginTop + (1.0 - s) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"520\" "
           "viewBox=\"0 0 760 520\">\n";
    svg += "<rect width=\"760\" height=\"520\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg += "<text x=\"" + coord(kWidth / 2) +
               "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" +
               xml_escape(options.title) + "</text>\n";
    }

    // Axis grid and tick labels.
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (int j = 0; j <= 4; ++j) {
        const double t = options.x_min + (options.x_max - options.x_min) * j / 4.0;
        const double x = px(t);
        svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(py(0.0)) + "\" x2=\"" +
               coord(x) + "\" y2=\"" + coord(py(1.0)) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(py(0.0) + 18.0) +
               "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
    }
    for (int j = 0; j <= 4; ++j) {
        const double s = j / 4.0;
        const double y = py(s);
        svg += "<line x1=\"" + coord(px(options.x_min)) + "\" y1=\"" + coord(y) +
               "\" x2=\"" + coord(px(options.x_max)) + "\" y2=\"" + coord(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + coord(kMarginLeft - 8.0) + "\" y=\"" + coord(y + 4.0) +
               "\" text-anchor=\"end\">" + tick_label(s) + "</text>\n";
    }
    svg += "</g>\n";

    if (options.show_guides) {
        svg += "<line x1=\"" + coord(px(options.x_min)) + "\" y1=\"" + coord(py(0.5)) +
               "\" x2=\"" + coord(px(options.x_max)) + "\" y2=\"" + coord(py(0.5)) +
               "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
        if (options.ams_guide >= options.x_min && options.ams_guide <= options.x_max) {
            svg += "<line x1=\"" + coord(px(options.ams_guide)) + "\" y1=\"" +
                   coord(py(0.0)) + "\" x2=\"" + coord(px(options.ams_guide)) +
                   "\" y2=\"" + coord(py(1.0)) +
                   "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
        }
    }

    // Axis frame.
    svg += "<rect x=\"" + coord(kMarginLeft) + "\" y=\"" + coord(kMarginTop) +
           "\" width=\"" + coord(plot_w) + "\" height=\"" + coord(plot_h) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(kMarginLeft + plot_w / 2) + "\" y=\"" +
           coord(kHeight - 14.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           xml_escape(options.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + coord(kMarginTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " +
           coord(kMarginTop + plot_h / 2) + ")\">" + xml_escape(options.y_label) +
           "</text>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const PlotCurve& curve = curves[c];
        const char* color = kPalette[c % (sizeof kPalette / sizeof kPalette[0])];

        // Restrict the step function to the visible range: find the
        // level at x_min, then the step points inside (x_min, x_max].
        double level = 1.0;
        std::vector<std::size_t> visible;
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            if (curve.times[i] <= options.x_min) {
                level = curve.survival[i];
            } else if (curve.times[i] <= options.x_max) {
                visible.push_back(i);
            }
        }
        // Thin dense curves, always keeping the first and last visible
        // step so the plotted range is faithful.
        std::vector<std::size_t> kept;
        if (visible.size() > options.max_vertices_per_curve) {
            const std::size_t stride =
                (visible.size() + options.max_vertices_per_curve - 1) /
                options.max_vertices_per_curve;
            for (std::size_t j = 0; j < visible.size(); j += stride) {
                kept.push_back(visible[j]);
            }
            if (kept.back() != visible.back()) kept.push_back(visible.back());
        } else {
            kept = visible;
        }

        std::string path = "M" + coord(px(options.x_min)) + " " + coord(py(level));
        for (std::size_t i : kept) {
            path += " H" + coord(px(curve.times[i]));
            path += " V" + coord(py(curve.survival[i]));
        }
        path += " H" + coord(px(options.x_max));
        svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
    }

    // Legend, top-right inside the plot area.
    const double legend_x = kMarginLeft + plot_w - 200.0;
    double legend_y = kMarginTop + 16.0;
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const char* color = kPalette[c % (sizeof kPalette / sizeof kPalette[0])];
        svg += "<line x1=\"" + coord(legend_x) + "\" y1=\"" + coord(legend_y - 4.0) +
               "\" x2=\"" + coord(legend_x + 26.0) + "\" y2=\"" + coord(legend_y - 4.0) +
               "\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + coord(legend_x + 32.0) + "\" y=\"" + coord(legend_y) +
               "\">" + xml_escape(curves[c].label) + "</text>\n";
        legend_y += 18.0;
    }
    svg += "</g>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace kmbias
