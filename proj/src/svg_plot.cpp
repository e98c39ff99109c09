#include "minshare/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "minshare/errors.hpp"

namespace minshare::svg {

namespace {

constexpr double kWidth = 880, kHeight = 560;
constexpr double kLeft = 84, kRight = 24, kTop = 48, kBottom = 64;
constexpr double kLogFloor = 1e-16;  // log-scale plots clip below this

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string tick_label(double v, bool log_axis) {
    if (log_axis) return "1e" + fmt(v, "%.0f");
    return fmt(v);
}

// Steps of 1, 2 or 5 times a power of ten, aiming for ~6 intervals.
double nice_step(double range) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.5) return mag;
    if (frac <= 3.5) return 2.0 * mag;
    if (frac <= 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg(const std::filesystem::path& path, const Plot& plot) {
    // Collect ranges (log plots operate on log10 of the data).
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool any = false;
    auto transform_y = [&](double y) {
        return plot.log_y ? std::log10(std::max(y, kLogFloor)) : y;
    };
    for (const auto& s : plot.series) {
        for (const auto& [x, y] : s.points) {
            const double ty = transform_y(y);
            if (!std::isfinite(ty)) continue;
            if (!any) {
                x_min = x_max = x;
                y_min = y_max = ty;
                any = true;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, ty);
                y_max = std::max(y_max, ty);
            }
        }
    }
    if (std::isfinite(plot.h_line)) {
        const double ty = transform_y(plot.h_line);
        y_min = any ? std::min(y_min, ty) : ty;
        y_max = any ? std::max(y_max, ty) : ty;
    }
    if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
    if (y_max - y_min < 1e-12) y_max = y_min + 1.0;

    const double x_step = nice_step(x_max - x_min);
    const double y_step = plot.log_y ? std::max(1.0, std::ceil((y_max - y_min) / 8.0))
                                     : nice_step(y_max - y_min);
    // Expand to tick boundaries.
    x_min = std::floor(x_min / x_step) * x_step;
    x_max = std::ceil(x_max / x_step) * x_step;
    y_min = std::floor(y_min / y_step) * y_step;
    y_max = std::ceil(y_max / y_step) * y_step;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"18\">" << escape(plot.title) << "</text>\n";

    // Grid and ticks.
    for (double x = x_min; x <= x_max + x_step * 0.5; x += x_step) {
        out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(px(x))
            << "\" y2=\"" << kTop + plot_h << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << tick_label(x, false) << "</text>\n";
    }
    for (double y = y_min; y <= y_max + y_step * 0.5; y += y_step) {
        out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << kLeft + plot_w
            << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(y) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << tick_label(y, plot.log_y) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";

    // Axis labels.
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << escape(plot.x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
        << "transform=\"rotate(-90 20 " << kTop + plot_h / 2 << ")\">" << escape(plot.y_label)
        << "</text>\n";

    if (std::isfinite(plot.h_line)) {
        const double y = py(transform_y(plot.h_line));
        out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft + plot_w
            << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#555555\" stroke-width=\"1.5\" stroke-dasharray=\"8 4\"/>\n";
        if (!plot.h_line_label.empty())
            out << "<text x=\"" << kLeft + 8 << "\" y=\"" << fmt(y - 6)
                << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\">"
                << escape(plot.h_line_label) << "</text>\n";
    }

    for (const auto& s : plot.series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (s.dashed) out << " stroke-dasharray=\"6 3\"";
        out << " points=\"";
        for (const auto& [x, y] : s.points)
            out << fmt(px(x), "%.2f") << "," << fmt(py(transform_y(y)), "%.2f") << " ";
        out << "\"/>\n";
    }

    // Legend, top-right inside the plot area.
    double ly = kTop + 18;
    for (const auto& s : plot.series) {
        const double lx = kLeft + plot_w - 200;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 28 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) out << " stroke-dasharray=\"6 3\"";
        out << "/>\n";
        out << "<text x=\"" << lx + 34 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"13\">" << escape(s.label) << "</text>\n";
        ly += 18;
    }

    out << "</svg>\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open for writing: " + path.string());
    file << out.str();
    if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace minshare::svg
