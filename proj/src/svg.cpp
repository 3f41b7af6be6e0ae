#include <psched/svg.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace psched {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_svg_scatter(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<SvgSeries>& series,
                       std::ostream& out) {
    constexpr double width = 640, height = 440;
    constexpr double left = 70, right = 610, top = 50, bottom = 390;

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const SvgSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max - x_min < 1e-12) x_max = x_min + 1;
    if (y_max - y_min < 1e-12) y_max = y_min + 1;
    const double x_pad = 0.04 * (x_max - x_min), y_pad = 0.06 * (y_max - y_min);
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    const auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    const auto py = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << (width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 5.0;
        const double fy = y_min + (y_max - y_min) * i / 5.0;
        out << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << bottom << "\" x2=\"" << fmt(px(fx))
            << "\" y2=\"" << (bottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << (bottom + 20)
            << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
        out << "<line x1=\"" << (left - 5) << "\" y1=\"" << fmt(py(fy)) << "\" x2=\"" << left
            << "\" y2=\"" << fmt(py(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << (left - 8) << "\" y=\"" << fmt(py(fy) + 4)
            << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
    }
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ((left + right) / 2) << "\" y=\"" << (bottom + 40)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << ((top + bottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << ((top + bottom) / 2) << ")\">"
        << y_label << "</text>\n";

    double legend_y = top + 6;
    for (const SvgSeries& s : series) {
        for (const auto& [x, y] : s.points)
            out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                << "\" r=\"2.5\" fill=\"" << s.color << "\" fill-opacity=\"0.65\"/>\n";
        out << "<circle cx=\"" << (right - 110) << "\" cy=\"" << fmt(legend_y)
            << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << (right - 100) << "\" y=\"" << fmt(legend_y + 4) << "\">" << s.label
            << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
}

}  // namespace psched
