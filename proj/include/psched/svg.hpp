#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace psched {

struct SvgSeries {
    std::string label;
    std::string color;  // any SVG color
    std::vector<std::pair<double, double>> points;
};

/// Static scatter plot, deterministic bytes for identical inputs.
void write_svg_scatter(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<SvgSeries>& series,
                       std::ostream& out);

}  // namespace psched
