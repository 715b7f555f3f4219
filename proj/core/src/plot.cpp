#include "tsaudit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tsaudit {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
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

struct Range {
    double lo;
    double hi;
};

Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

class Canvas {
public:
    Canvas(Range xr, Range yr) : xr_(xr), yr_(yr) {}

    [[nodiscard]] double px(double x) const {
        return kLeft + (x - xr_.lo) / (xr_.hi - xr_.lo) * (kWidth - kLeft - kRight);
    }
    [[nodiscard]] double py(double y) const {
        return kHeight - kBottom - (y - yr_.lo) / (yr_.hi - yr_.lo) * (kHeight - kTop - kBottom);
    }

    void axes(std::string& out, const PlotSpec& plot) const {
        out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
               "\" height=\"" + num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"#000\"/>\n";
        const double xs = nice_step(xr_.hi - xr_.lo);
        for (double v = std::ceil(xr_.lo / xs) * xs; v <= xr_.hi; v += xs) {
            out += "<line x1=\"" + num(px(v)) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(px(v)) +
                   "\" y2=\"" + num(kHeight - kBottom + 5) + "\" stroke=\"#000\"/>\n";
            out += "<text x=\"" + num(px(v)) + "\" y=\"" + num(kHeight - kBottom + 18) +
                   "\" text-anchor=\"middle\">" + tick_label(v) + "</text>\n";
        }
        const double ys = nice_step(yr_.hi - yr_.lo);
        for (double v = std::ceil(yr_.lo / ys) * ys; v <= yr_.hi; v += ys) {
            out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(v)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
                   num(py(v)) + "\" stroke=\"#000\"/>\n";
            out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(v) + 4) + "\" text-anchor=\"end\">" +
                   tick_label(v) + "</text>\n";
        }
        out += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kTop - 15) +
               "\" text-anchor=\"middle\" font-size=\"14\">" + escape(plot.title) + "</text>\n";
        out += "<text x=\"" + num(kLeft + (kWidth - kLeft - kRight) / 2) + "\" y=\"" + num(kHeight - 15) +
               "\" text-anchor=\"middle\">" + escape(plot.x_label) + "</text>\n";
        const double cy = kTop + (kHeight - kTop - kBottom) / 2;
        out += "<text x=\"18\" y=\"" + num(cy) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num(cy) +
               ")\">" + escape(plot.y_label) + "</text>\n";
    }

private:
    Range xr_;
    Range yr_;
};

}  // namespace

std::string to_svg(const PlotSpec& plot) {
    double xlo = 0.0;
    double xhi = 1.0;
    double ylo = 0.0;
    double yhi = 1.0;
    if (!plot.points.empty()) {
        const auto [xmin, xmax] = std::minmax_element(plot.points.begin(), plot.points.end(),
                                                      [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
        const auto [ymin, ymax] = std::minmax_element(plot.points.begin(), plot.points.end(),
                                                      [](const PlotPoint& a, const PlotPoint& b) { return a.y < b.y; });
        xlo = xmin->x;
        xhi = xmax->x;
        ylo = ymin->y;
        yhi = ymax->y;
    }
    if (plot.kind == PlotKind::Correlogram) {
        xlo = std::min(xlo, 0.0) - 0.5;
        xhi += 0.5;
        ylo = -1.0;
        yhi = 1.0;
    }
    const Range xr = plot.kind == PlotKind::Correlogram ? Range{xlo, xhi} : padded(xlo, xhi);
    const Range yr = plot.kind == PlotKind::Correlogram ? Range{-1.05, 1.05} : padded(ylo, yhi);
    const Canvas canvas(xr, yr);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    canvas.axes(out, plot);

    if (plot.kind == PlotKind::Scatter) {
        for (const auto& p : plot.points) {
            out += "<circle cx=\"" + num(canvas.px(p.x)) + "\" cy=\"" + num(canvas.py(p.y)) +
                   "\" r=\"2.5\" fill=\"none\" stroke=\"#000\"/>\n";
        }
        if (plot.line_slope) {
            const double y0 = plot.line_intercept + *plot.line_slope * xr.lo;
            const double y1 = plot.line_intercept + *plot.line_slope * xr.hi;
            out += "<line x1=\"" + num(canvas.px(xr.lo)) + "\" y1=\"" + num(canvas.py(y0)) + "\" x2=\"" +
                   num(canvas.px(xr.hi)) + "\" y2=\"" + num(canvas.py(y1)) +
                   "\" stroke=\"#555\" stroke-dasharray=\"6 3\"/>\n";
        }
    } else {
        out += "<line x1=\"" + num(canvas.px(xr.lo)) + "\" y1=\"" + num(canvas.py(0)) + "\" x2=\"" +
               num(canvas.px(xr.hi)) + "\" y2=\"" + num(canvas.py(0)) + "\" stroke=\"#000\"/>\n";
        if (plot.band) {
            for (const double b : {*plot.band, -*plot.band}) {
                out += "<line x1=\"" + num(canvas.px(xr.lo)) + "\" y1=\"" + num(canvas.py(b)) + "\" x2=\"" +
                       num(canvas.px(xr.hi)) + "\" y2=\"" + num(canvas.py(b)) +
                       "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
            }
        }
        for (const auto& p : plot.points) {
            out += "<line x1=\"" + num(canvas.px(p.x)) + "\" y1=\"" + num(canvas.py(0)) + "\" x2=\"" +
                   num(canvas.px(p.x)) + "\" y2=\"" + num(canvas.py(p.y)) + "\" stroke=\"#000\" stroke-width=\"3\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string to_point_dump(const PlotSpec& plot) {
    std::string out = "# " + plot.title + "\n# x: " + plot.x_label + "\n# y: " + plot.y_label + "\n";
    char buf[96];
    if (plot.line_slope) {
        std::snprintf(buf, sizeof buf, "# line: %.17g %.17g\n", plot.line_intercept, *plot.line_slope);
        out += buf;
    }
    if (plot.band) {
        std::snprintf(buf, sizeof buf, "# band: %.17g\n", *plot.band);
        out += buf;
    }
    for (const auto& p : plot.points) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        out += buf;
    }
    return out;
}

}  // namespace tsaudit
