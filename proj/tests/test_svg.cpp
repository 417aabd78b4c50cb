#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "kmbias/svg.hpp"

using namespace kmbias;

namespace {

PlotCurve step_curve(std::string label, std::vector<double> times,
                     std::vector<double> survival) {
    PlotCurve curve;
    curve.label = std::move(label);
    curve.times = std::move(times);
    curve.survival = std::move(survival);
    return curve;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("rendering is deterministic and well-formed") {
    const std::vector<PlotCurve> curves = {
        step_curve("estimate", {0.5, 1.0, 2.0}, {0.8, 0.55, 0.3}),
        step_curve("limit", {0.4, 1.1, 2.2}, {0.82, 0.5, 0.28}),
    };
    PlotOptions options;
    options.title = "two curves";
    const std::string a = render_survival_svg(curves, options);
    const std::string b = render_survival_svg(curves, options);
    CHECK(a == b);

    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("two curves") != std::string::npos);
    CHECK(a.find("estimate") != std::string::npos);
    CHECK(a.find("limit") != std::string::npos);
    CHECK(count_occurrences(a, "<path") == 2);
    // Dashed guides at S = 0.5 and t = ams.
    CHECK(count_occurrences(a, "stroke-dasharray") == 2);

    PlotOptions no_guides = options;
    no_guides.show_guides = false;
    CHECK(count_occurrences(render_survival_svg(curves, no_guides),
                            "stroke-dasharray") == 0);
}

TEST_CASE("labels and titles are XML-escaped") {
    const std::vector<PlotCurve> curves = {
        step_curve("a < b & \"c\"", {1.0}, {0.5}),
    };
    PlotOptions options;
    options.title = "<title>";
    const std::string svg = render_survival_svg(curves, options);
    CHECK(svg.find("a &lt; b &amp; &quot;c&quot;") != std::string::npos);
    CHECK(svg.find("&lt;title&gt;") != std::string::npos);
    CHECK(svg.find("<title>") == std::string::npos);
}

TEST_CASE("dense curves are thinned to the vertex budget") {
    std::vector<double> times, survival;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        times.push_back(4.0 * (i + 1) / (n + 1.0));
        survival.push_back(1.0 - 0.9 * (i + 1) / (n + 1.0));
    }
    PlotOptions options;
    options.max_vertices_per_curve = 500;
    const std::string svg =
        render_survival_svg({step_curve("dense", times, survival)}, options);
    // Each kept step contributes one H and one V command.
    const std::size_t verticals = count_occurrences(svg, " V");
    CHECK(verticals <= 502);
    CHECK(verticals >= 400);

    // The first and last visible points survive thinning: the path
    // ends at the final level.
    char expected_last[32];
    std::snprintf(expected_last, sizeof expected_last, "V%.2f",
                  46.0 + (520.0 - 46.0 - 58.0) * (1.0 - survival.back()));
    CHECK(svg.find(expected_last) != std::string::npos);
}

TEST_CASE("curves outside the x-range are clipped, not dropped") {
    // Curve starts after x_max: the whole visible span is the implicit
    // S = 1 level line.
    const std::string svg = render_survival_svg(
        {step_curve("late", {10.0, 11.0}, {0.6, 0.4})}, PlotOptions{});
    CHECK(count_occurrences(svg, "<path") == 1);
    CHECK(count_occurrences(svg, " V") == 0);  // no visible step
}

TEST_CASE("invalid plot inputs are rejected") {
    CHECK_THROWS_AS(render_survival_svg({}, PlotOptions{}), std::invalid_argument);

    const PlotCurve unlabeled = step_curve("", {1.0}, {0.5});
    CHECK_THROWS_AS(render_survival_svg({unlabeled}, PlotOptions{}),
                    std::invalid_argument);

    const PlotCurve a = step_curve("same", {1.0}, {0.5});
    const PlotCurve b = step_curve("same", {2.0}, {0.4});
    CHECK_THROWS_AS(render_survival_svg({a, b}, PlotOptions{}), std::invalid_argument);

    PlotOptions bad_range;
    bad_range.x_min = 2.0;
    bad_range.x_max = 1.0;
    CHECK_THROWS_AS(render_survival_svg({a}, bad_range), std::invalid_argument);

    PlotOptions tiny_budget;
    tiny_budget.max_vertices_per_curve = 1;
    CHECK_THROWS_AS(render_survival_svg({a}, tiny_budget), std::invalid_argument);
}
