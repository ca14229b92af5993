#include "rsnn/svg_plot.hpp"

#include "rsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rsnn {

namespace {

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;

const char* kSeriesColors[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

std::string f2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

// short human label for tick values
std::string tick_label(double x) {
    char buf[32];
    if (x == 0.0) return "0";
    if (std::abs(x) >= 1000.0 || std::abs(x) < 0.01)
        std::snprintf(buf, sizeof(buf), "%.3g", x);
    else
        std::snprintf(buf, sizeof(buf), "%g", std::round(x * 1000.0) / 1000.0);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1; // data range
    int width, height;

    double px(double x) const {
        const double w = static_cast<double>(width - kMarginLeft - kMarginRight);
        return kMarginLeft + (x - x0) / (x1 - x0) * w;
    }
    double py(double y) const {
        const double h = static_cast<double>(height - kMarginTop - kMarginBottom);
        return kMarginTop + (y1 - y) / (y1 - y0) * h;
    }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    std::vector<double> ticks;
    const double span = hi - lo;
    if (span <= 0.0) return {lo};
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    const double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + 1e-9 * span; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

void open_svg(std::ostringstream& out, const PlotStyle& style) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
        << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width
        << ' ' << style.height << "\">\n";
    out << "<rect width=\"" << style.width << "\" height=\"" << style.height
        << "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out << "<text x=\"" << style.width / 2
            << "\" y=\"20\" font-family=\"monospace\" font-size=\"14\" "
               "text-anchor=\"middle\">"
            << style.title << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Frame& f,
               const std::string& x_label, const std::string& y_label) {
    const double left = kMarginLeft;
    const double right = f.width - kMarginRight;
    const double top = kMarginTop;
    const double bottom = f.height - kMarginBottom;

    out << "<rect x=\"" << f2(left) << "\" y=\"" << f2(top) << "\" width=\""
        << f2(right - left) << "\" height=\"" << f2(bottom - top)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (double t : nice_ticks(f.x0, f.x1)) {
        const double x = f.px(t);
        out << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(bottom) << "\" x2=\""
            << f2(x) << "\" y2=\"" << f2(bottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << f2(x) << "\" y=\"" << f2(bottom + 18)
            << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">"
            << tick_label(t) << "</text>\n";
    }
    for (double t : nice_ticks(f.y0, f.y1)) {
        const double y = f.py(t);
        out << "<line x1=\"" << f2(left - 5) << "\" y1=\"" << f2(y) << "\" x2=\""
            << f2(left) << "\" y2=\"" << f2(y) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << f2(left - 8) << "\" y=\"" << f2(y + 4)
            << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">"
            << tick_label(t) << "</text>\n";
    }
    out << "<text x=\"" << (kMarginLeft + (f.width - kMarginLeft - kMarginRight) / 2)
        << "\" y=\"" << f.height - 10
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
        << x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << (kMarginTop + (f.height - kMarginTop - kMarginBottom) / 2)
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 "
        << (kMarginTop + (f.height - kMarginTop - kMarginBottom) / 2) << ")\">"
        << y_label << "</text>\n";
}

void draw_polyline(std::ostringstream& out, const Frame& f,
                   const std::vector<double>& xs, const std::vector<double>& ys,
                   const std::string& color, const std::string& dash = "") {
    if (xs.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) out << ' ';
        out << f2(f.px(xs[k])) << ',' << f2(f.py(ys[k]));
    }
    out << "\"/>\n";
}

} // namespace

std::string render_raster_svg(const SpikeRecord& record,
                              const std::vector<ShadedInterval>& shading,
                              const PlotStyle& style) {
    std::ostringstream out;
    open_svg(out, style);
    Frame f{0.0, std::max(record.duration_ms, 1.0),
            -0.5, std::max(static_cast<double>(record.num_neurons) - 0.5, 0.5),
            style.width, style.height};

    for (const auto& s : shading) {
        const double x = f.px(s.start_ms);
        const double w = f.px(s.end_ms) - x;
        out << "<rect x=\"" << f2(x) << "\" y=\"" << f2(kMarginTop) << "\" width=\""
            << f2(w) << "\" height=\""
            << f2(style.height - kMarginTop - kMarginBottom) << "\" fill=\""
            << s.color << "\" fill-opacity=\"0.18\"/>\n";
    }
    draw_axes(out, f, "time (ms)", "neuron");
    for (const auto& e : record.events)
        out << "<circle cx=\"" << f2(f.px(e.time_ms)) << "\" cy=\""
            << f2(f.py(static_cast<double>(e.neuron))) << "\" r=\"1.2\" fill=\"black\"/>\n";
    out << "</svg>\n";
    return out.str();
}

std::string render_alignment_svg(const AlignmentTrace& trace, const PlotStyle& style) {
    std::ostringstream out;
    open_svg(out, style);
    const double t1 = trace.times_ms.empty() ? 1.0 : trace.times_ms.back();
    Frame f{0.0, std::max(t1, 1.0), -1.05, 1.05, style.width, style.height};
    draw_axes(out, f, "time (ms)", "alignment index");

    // zero line
    out << "<line x1=\"" << f2(f.px(f.x0)) << "\" y1=\"" << f2(f.py(0.0)) << "\" x2=\""
        << f2(f.px(f.x1)) << "\" y2=\"" << f2(f.py(0.0))
        << "\" stroke=\"#999999\" stroke-dasharray=\"4,4\"/>\n";

    const std::size_t series = trace.rho.empty() ? 0 : trace.rho.front().size();
    for (std::size_t s = 0; s < series; ++s) {
        std::vector<double> ys;
        ys.reserve(trace.times_ms.size());
        for (const auto& row : trace.rho) ys.push_back(row[s]);
        draw_polyline(out, f, trace.times_ms, ys, kSeriesColors[s % 4]);
    }

    static const char* names[4] = {"A", "B", "C", "D"};
    for (std::size_t s = 0; s < std::min<std::size_t>(series, 4); ++s) {
        const double x = style.width - kMarginRight - 90 + 22 * static_cast<double>(s);
        out << "<text x=\"" << f2(x) << "\" y=\"" << kMarginTop + 14
            << "\" font-family=\"monospace\" font-size=\"12\" fill=\""
            << kSeriesColors[s] << "\">" << names[s] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_profile_svg(const std::vector<double>& input_rates_hz,
                               const std::vector<double>& output_rates_hz,
                               const PlotStyle& style) {
    if (input_rates_hz.size() != output_rates_hz.size() || input_rates_hz.empty())
        throw ParameterError("profile plot needs matching nonempty series");
    std::ostringstream out;
    open_svg(out, style);

    double ymax = 1.0;
    for (double v : input_rates_hz) ymax = std::max(ymax, v);
    for (double v : output_rates_hz) ymax = std::max(ymax, v);
    const double n = static_cast<double>(input_rates_hz.size());
    Frame f{-0.5, n - 0.5, 0.0, 1.1 * ymax, style.width, style.height};
    draw_axes(out, f, "cluster", "rate (Hz)");

    std::vector<double> xs(input_rates_hz.size());
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = static_cast<double>(k);

    draw_polyline(out, f, xs, input_rates_hz, "black", "5,4");
    for (std::size_t k = 0; k < xs.size(); ++k)
        out << "<circle cx=\"" << f2(f.px(xs[k])) << "\" cy=\""
            << f2(f.py(input_rates_hz[k])) << "\" r=\"2.5\" fill=\"black\"/>\n";

    draw_polyline(out, f, xs, output_rates_hz, kSeriesColors[0]);
    for (std::size_t k = 0; k < xs.size(); ++k)
        out << "<circle cx=\"" << f2(f.px(xs[k])) << "\" cy=\""
            << f2(f.py(output_rates_hz[k])) << "\" r=\"2.5\" fill=\""
            << kSeriesColors[0] << "\"/>\n";

    out << "<text x=\"" << style.width - kMarginRight - 150 << "\" y=\"" << kMarginTop + 14
        << "\" font-family=\"monospace\" font-size=\"12\" fill=\"black\">input</text>\n";
    out << "<text x=\"" << style.width - kMarginRight - 90 << "\" y=\"" << kMarginTop + 14
        << "\" font-family=\"monospace\" font-size=\"12\" fill=\"" << kSeriesColors[0]
        << "\">output</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string render_diagram_svg(const BifurcationDiagram& diagram, const PlotStyle& style) {
    std::ostringstream out;
    open_svg(out, style);

    double xlo = 1e300, xhi = -1e300, ylo = 0.0, yhi = 0.0;
    for (const auto& pt : diagram.points) {
        if (!pt.valid) continue;
        xlo = std::min(xlo, pt.alpha);
        xhi = std::max(xhi, pt.alpha);
        ylo = std::min(ylo, pt.projection_hz);
        yhi = std::max(yhi, pt.projection_hz);
    }
    if (xlo > xhi) { xlo = 0.0; xhi = 1.0; }
    if (yhi - ylo < 1e-9) { ylo -= 1.0; yhi += 1.0; }
    const double pad = 0.08 * (yhi - ylo);
    Frame f{xlo - 0.05 * (xhi - xlo), xhi + 0.05 * (xhi - xlo), ylo - pad, yhi + pad,
            style.width, style.height};
    draw_axes(out, f, "gain alpha", "projection (Hz)");

    out << "<line x1=\"" << f2(f.px(f.x0)) << "\" y1=\"" << f2(f.py(0.0)) << "\" x2=\""
        << f2(f.px(f.x1)) << "\" y2=\"" << f2(f.py(0.0))
        << "\" stroke=\"#999999\" stroke-dasharray=\"4,4\"/>\n";

    const auto color_of = [](const std::string& ic) -> std::string {
        if (ic == "A" || ic == "fp-from-A") return kSeriesColors[0];
        if (ic == "B" || ic == "fp-from-B") return kSeriesColors[1];
        return "black";
    };
    for (const auto& pt : diagram.points) {
        if (!pt.valid) continue;
        out << "<circle cx=\"" << f2(f.px(pt.alpha)) << "\" cy=\""
            << f2(f.py(pt.projection_hz)) << "\" r=\"3\" fill=\"" << color_of(pt.initial_condition)
            << "\" fill-opacity=\"0.75\"/>\n";
    }

    int k = 0;
    for (const char* name : {"A", "B", "background"}) {
        out << "<text x=\"" << style.width - kMarginRight - 180 + 60 * k << "\" y=\""
            << kMarginTop + 14 << "\" font-family=\"monospace\" font-size=\"12\" fill=\""
            << color_of(name) << "\">" << name << "</text>\n";
        ++k;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace rsnn
