#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cocimap/io.hpp"

// Minimal static SVG renderings. The delimited tables are the contract;
// these charts are best-effort companions.

namespace cocimap::svg {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline void line_chart(const std::vector<Series>& series, const std::string& title,
                       const std::filesystem::path& path) {
    const double w = 640, h = 400, pad = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 0, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
    auto py = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    auto out = io::open_out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    out << "<line x1='" << pad << "' y1='" << h - pad << "' x2='" << w - pad << "' y2='"
        << h - pad << "' stroke='black'/>\n";
    out << "<line x1='" << pad << "' y1='" << pad << "' x2='" << pad << "' y2='" << h - pad
        << "' stroke='black'/>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % 8];
        out << "<polyline fill='none' stroke='" << color << "' points='";
        for (const auto& [x, y] : series[i].points)
            out << io::fmt_double(px(x)) << ',' << io::fmt_double(py(y)) << ' ';
        out << "'/>\n";
        out << "<text x='" << w - pad + 4 << "' y='" << pad + 16 * static_cast<double>(i)
            << "' font-size='11' fill='" << color << "'>" << series[i].label << "</text>\n";
    }
    out << "</svg>\n";
}

inline void bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                      const std::string& title, const std::filesystem::path& path) {
    const double w = 640, h = 400, pad = 50;
    double ymax = 1;
    for (const auto& [label, v] : bars) ymax = std::max(ymax, v);
    double bw = bars.empty() ? 1 : (w - 2 * pad) / static_cast<double>(bars.size());
    auto out = io::open_out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        double bh = bars[i].second / ymax * (h - 2 * pad);
        double x = pad + bw * static_cast<double>(i);
        out << "<rect x='" << io::fmt_double(x) << "' y='" << io::fmt_double(h - pad - bh)
            << "' width='" << io::fmt_double(bw * 0.85) << "' height='" << io::fmt_double(bh)
            << "' fill='#1f77b4'/>\n";
        if (bars.size() <= 30)
            out << "<text x='" << io::fmt_double(x + bw * 0.4) << "' y='" << h - pad + 14
                << "' font-size='9' text-anchor='middle'>" << bars[i].first << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace cocimap::svg
