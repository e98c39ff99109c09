#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace minshare::svg {

struct Series {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;  // decade ticks; positive y values required
    std::vector<Series> series;
    double h_line = std::numeric_limits<double>::quiet_NaN();  // horizontal reference
    std::string h_line_label;
};

// Self-contained SVG: inline styling, no external assets.
void write_svg(const std::filesystem::path& path, const Plot& plot);

}  // namespace minshare::svg
