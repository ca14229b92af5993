#pragma once

#include "rsnn/analysis.hpp"
#include "rsnn/engine.hpp"

#include <string>
#include <vector>

namespace rsnn {

// Deterministic SVG rendering: fixed canvas, plain-text labels, two-decimal
// coordinates, no timestamps, so outputs are byte-stable for golden tests.

struct PlotStyle {
    int width = 720;
    int height = 480;
    std::string title;
};

// spike raster; optional shaded stimulus intervals (start, end, css color)
struct ShadedInterval {
    double start_ms;
    double end_ms;
    std::string color;
};

std::string render_raster_svg(const SpikeRecord& record,
                              const std::vector<ShadedInterval>& shading,
                              const PlotStyle& style);

// alignment traces over time, one line per output, fixed color order
// (A blue, B orange, C green, D red)
std::string render_alignment_svg(const AlignmentTrace& trace,
                                 const PlotStyle& style);

// cluster profile: input rates (dashed, dots) vs output rates (solid)
std::string render_profile_svg(const std::vector<double>& input_rates_hz,
                               const std::vector<double>& output_rates_hz,
                               const PlotStyle& style);

// bifurcation diagram: projection vs alpha, colored by initial condition
// (A blue, B orange, background black)
std::string render_diagram_svg(const BifurcationDiagram& diagram,
                               const PlotStyle& style);

} // namespace rsnn
