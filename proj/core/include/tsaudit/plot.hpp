#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tsaudit {

enum class PlotKind { Scatter, Correlogram };

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const PlotPoint&, const PlotPoint&) = default;
};

/// Renderer-neutral description of a chart.
struct PlotSpec {
    PlotKind kind = PlotKind::Scatter;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotPoint> points;
    /// Scatter only: y = line_intercept + line_slope * x.
    std::optional<double> line_slope;
    double line_intercept = 0.0;
    /// Correlogram only: half-width of the confidence band drawn around zero.
    std::optional<double> band;

    friend bool operator==(const PlotSpec&, const PlotSpec&) = default;
};

/// Self-contained SVG (no external fonts or stylesheets). Output depends only
/// on the PlotSpec, so identical PlotSpecs give identical bytes.
[[nodiscard]] std::string to_svg(const PlotSpec& plot);

/// One "x y" line per point with 17 significant digits, preceded by a short
/// header; meant for golden-file comparisons.
[[nodiscard]] std::string to_point_dump(const PlotSpec& plot);

}  // namespace tsaudit
