#pragma once

// Minimal standalone SVG figures: no scripts, fonts, or external references.

#include <string>
#include <vector>

namespace oscillent {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;  // draw points instead of a polyline
};

struct Axes {
    std::string title;
    std::string x_label;  // include units, e.g. "x [length]"
    std::string y_label;
};

/// Line/marker plot. Returns false (and writes nothing) when every series is empty.
bool write_line_plot_svg(const std::string& path, const std::vector<Series>& series, const Axes& axes);

/// Row-major `values` (rows = y bins, cols = x bins) as a grey-scale heatmap over
/// [x_min, x_max] x [y_min, y_max], darker is larger, saturating at the 98th percentile.
/// Returns false when the data is empty.
bool write_heatmap_svg(const std::string& path, const std::vector<double>& values, std::size_t rows,
                       std::size_t cols, double x_min, double x_max, double y_min, double y_max, const Axes& axes);

} // namespace oscillent
