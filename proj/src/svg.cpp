#include "oscillent/svg.hpp"

#include "oscillent/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace oscillent {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    [[nodiscard]] double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    [[nodiscard]] double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
        lo -= pad;
        hi += pad;
    }
}

void header(std::ostringstream& out, const Axes& axes) {
    out << fmt::format(R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)svg",
                       kWidth, kHeight, kWidth, kHeight)
        << '\n';
    out << R"svg(<rect width="100%" height="100%" fill="white"/>)svg" << '\n';
    out << fmt::format(R"svg(<text x="{}" y="24" font-size="15" text-anchor="middle" font-family="sans-serif">{}</text>)svg",
                       kWidth / 2, escape(axes.title))
        << '\n';
}

void frame_and_ticks(std::ostringstream& out, const Frame& f, const Axes& axes) {
    out << fmt::format(R"svg(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)svg", kLeft, kTop,
                       kWidth - kLeft - kRight, kHeight - kTop - kBottom)
        << '\n';
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        out << fmt::format(R"svg(<text x="{:.1f}" y="{:.1f}" font-size="11" text-anchor="middle" font-family="sans-serif">{:.3g}</text>)svg",
                           f.px(xv), kHeight - kBottom + 16, xv)
            << '\n';
        out << fmt::format(R"svg(<text x="{:.1f}" y="{:.1f}" font-size="11" text-anchor="end" font-family="sans-serif">{:.3g}</text>)svg",
                           kLeft - 6, f.py(yv) + 4, yv)
            << '\n';
    }
    out << fmt::format(R"svg(<text x="{}" y="{}" font-size="13" text-anchor="middle" font-family="sans-serif">{}</text>)svg",
                       (kLeft + kWidth - kRight) / 2, kHeight - 18, escape(axes.x_label))
        << '\n';
    out << fmt::format(R"svg(<text x="18" y="{}" font-size="13" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 18 {})">{}</text>)svg",
                       (kTop + kHeight - kBottom) / 2, (kTop + kHeight - kBottom) / 2, escape(axes.y_label))
        << '\n';
}

void save(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::trunc);
    file << text;
    if (!file) throw Error("cannot write " + path);
}

} // namespace

bool write_line_plot_svg(const std::string& path, const std::vector<Series>& series, const Axes& axes) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    bool any = false;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            any = true;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!any) return false;
    widen(x0, x1);
    widen(y0, y1);
    const Frame f{x0, x1, y0, y1};

    std::ostringstream out;
    header(out, axes);
    frame_and_ticks(out, f, axes);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out << fmt::format(R"svg(<circle cx="{:.2f}" cy="{:.2f}" r="3" fill="{}"/>)svg", f.px(s.x[i]), f.py(s.y[i]),
                                   color)
                    << '\n';
            }
        } else {
            out << R"svg(<polyline fill="none" stroke-width="1.5" stroke=")svg" << color << R"svg(" points=")svg";
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out << fmt::format("{:.2f},{:.2f} ", f.px(s.x[i]), f.py(s.y[i]));
            }
            out << "\"/>\n";
        }
        out << fmt::format(R"svg(<text x="{}" y="{}" font-size="12" fill="{}" font-family="sans-serif">{}</text>)svg",
                           kLeft + 10, kTop + 16 + 15 * static_cast<double>(k), color, escape(s.label))
            << '\n';
    }
    out << "</svg>\n";
    save(path, out.str());
    return true;
}

bool write_heatmap_svg(const std::string& path, const std::vector<double>& values, std::size_t rows,
                       std::size_t cols, double x_min, double x_max, double y_min, double y_max, const Axes& axes) {
    if (rows == 0 || cols == 0 || values.size() != rows * cols) return false;
    // Scale to the 98th percentile so integrable edge singularities do not wash out the map.
    std::vector<double> finite;
    for (double v : values) {
        if (std::isfinite(v) && v > 0.0) finite.push_back(v);
    }
    double vmax = 0.0;
    if (!finite.empty()) {
        const auto k = static_cast<std::ptrdiff_t>(0.98 * static_cast<double>(finite.size() - 1));
        std::nth_element(finite.begin(), finite.begin() + k, finite.end());
        vmax = finite[static_cast<std::size_t>(k)];
    }
    const Frame f{x_min, x_max, y_min, y_max};
    const double cw = (kWidth - kLeft - kRight) / static_cast<double>(cols);
    const double ch = (kHeight - kTop - kBottom) / static_cast<double>(rows);

    std::ostringstream out;
    header(out, axes);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = values[r * cols + c];
            int level = 0;
            if (std::isfinite(v) && vmax > 0.0) level = 255 - static_cast<int>(std::lround(255.0 * std::clamp(v / vmax, 0.0, 1.0)));
            if (level == 255) continue;
            out << fmt::format(R"svg(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="rgb({},{},{})"/>)svg",
                               kLeft + cw * static_cast<double>(c),
                               kHeight - kBottom - ch * static_cast<double>(r + 1), cw + 0.05, ch + 0.05, level,
                               level, level)
                << '\n';
        }
    }
    frame_and_ticks(out, f, axes);
    out << "</svg>\n";
    save(path, out.str());
    return true;
}

} // namespace oscillent
