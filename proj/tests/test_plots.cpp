#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rsnn/errors.hpp"
#include "rsnn/svg_plot.hpp"

#include <string>

using namespace rsnn;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
    int count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

} // namespace

TEST_CASE("empty raster still renders axes") {
    SpikeRecord record;
    record.num_neurons = 8;
    record.duration_ms = 1000.0;
    const std::string svg = render_raster_svg(record, {}, {});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "<circle") == 0);
    CHECK(count_occurrences(svg, "<line") > 4); // ticks
}

TEST_CASE("raster marks every spike and shades stimulus windows") {
    SpikeRecord record;
    record.num_neurons = 4;
    record.duration_ms = 500.0;
    record.events = {{10.0, 0}, {20.0, 1}, {450.0, 3}};
    const std::string svg =
        render_raster_svg(record, {{100.0, 400.0, "#1f77b4"}}, {});
    CHECK(count_occurrences(svg, "<circle") == 3);
    CHECK(count_occurrences(svg, "fill-opacity") == 1);
}

TEST_CASE("alignment plot draws one trace per output column") {
    AlignmentTrace trace;
    for (int k = 0; k <= 10; ++k) {
        trace.times_ms.push_back(10.0 * k);
        trace.rho.push_back({0.1, -0.1, 0.5, -0.5});
    }
    const std::string svg = render_alignment_svg(trace, {});
    CHECK(count_occurrences(svg, "<polyline") == 4);
}

TEST_CASE("diagram plot colors the three initial conditions") {
    BifurcationDiagram diagram;
    for (double alpha : {0.01, 0.02}) {
        diagram.points.push_back({alpha, "A", 1, 10.0, true, ""});
        diagram.points.push_back({alpha, "B", 1, -10.0, true, ""});
        diagram.points.push_back({alpha, "background", 1, 0.0, true, ""});
    }
    diagram.points.push_back({0.03, "A", 1, 0.0, false, "aborted"});
    const std::string svg = render_diagram_svg(diagram, {});
    CHECK(count_occurrences(svg, "<circle") == 6); // invalid point skipped
    CHECK(svg.find("#1f77b4") != std::string::npos);
    CHECK(svg.find("#ff7f0e") != std::string::npos);
    CHECK(svg.find("\"black\"") != std::string::npos);
}

TEST_CASE("profile plot needs matching series") {
    CHECK_THROWS_AS(render_profile_svg({1.0, 2.0}, {1.0}, {}), ParameterError);
    const std::string svg = render_profile_svg({0.0, 100.0, 0.0}, {5.0, 80.0, 5.0}, {});
    CHECK(count_occurrences(svg, "<polyline") == 2);
}

TEST_CASE("rendering is deterministic") {
    AlignmentTrace trace;
    for (int k = 0; k <= 50; ++k) {
        trace.times_ms.push_back(2.0 * k);
        trace.rho.push_back({0.3, -0.3});
    }
    PlotStyle style;
    style.title = "traces";
    CHECK(render_alignment_svg(trace, style) == render_alignment_svg(trace, style));
}
