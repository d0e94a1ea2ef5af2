// Minimal hand-rolled SVG output: diagrams as labeled segments through the
// joint, and an optional grayscale heatmap of a sampled field over the
// disc. No external renderer, fixed decimal formatting so output is
// byte-stable.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "scatter/grid.hpp"
#include "scatter/wall.hpp"

namespace scatter {

namespace svgdetail {

inline std::string fmt(double v, int prec = 2) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// view box is [-1.4, 1.4]^2 mapped to a 640 px square, y up
inline double px(double x) { return (x + 1.4) * (640.0 / 2.8); }
inline double py(double y) { return (1.4 - y) * (640.0 / 2.8); }

}  // namespace svgdetail

inline std::string diagram_svg(const Diagram& d) {
    using svgdetail::fmt;
    using svgdetail::px;
    using svgdetail::py;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    out += "<circle cx=\"" + fmt(px(0)) + "\" cy=\"" + fmt(py(0)) +
           "\" r=\"3\" fill=\"black\"/>\n";
    for (const Wall& w : d.walls) {
        double len = std::sqrt(static_cast<double>(dot(w.direction, w.direction)));
        double ux = w.direction.x / len, uy = w.direction.y / len;
        // ray support is the trailing half-line -R_{>=0} m; lines extend both ways
        double hx = -1.25 * ux, hy = -1.25 * uy;
        double tx = (w.support == Support::Line) ? 1.25 * ux : 0.0;
        double ty = (w.support == Support::Line) ? 1.25 * uy : 0.0;
        const char* color = (w.support == Support::Line) ? "#1f4e9c" : "#b03030";
        out += "<line x1=\"" + fmt(px(hx)) + "\" y1=\"" + fmt(py(hy)) + "\" x2=\"" +
               fmt(px(tx)) + "\" y2=\"" + fmt(py(ty)) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        double ang = std::atan2(static_cast<double>(w.direction.y),
                                static_cast<double>(w.direction.x)) *
                     180.0 / std::numbers::pi;
        std::string label = "(" + std::to_string(w.direction.x) + "," +
                            std::to_string(w.direction.y) + ") " + fmt(ang, 1) + "&#176;";
        if (!w.log_theta.is_zero())
            label += " t^" + std::to_string(w.log_theta.min_order());
        // anchor the label just past the far end of the drawn support
        double lx = hx * 1.06, ly = hy * 1.06;
        out += "<text x=\"" + fmt(px(lx) - 30.0) + "\" y=\"" + fmt(py(ly)) +
               "\" font-size=\"13\" font-family=\"monospace\" fill=\"" + color + "\">" +
               label + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

// grayscale |field| over the grid, downsampled so no side exceeds 128 cells
inline std::string heatmap_svg(const LabGrid& g, const ScalarField& f) {
    using svgdetail::fmt;
    int stride = (g.n + 127) / 128;
    int cells = (g.n + stride - 1) / stride;
    double peak = 0.0;
    for (double v : f.v) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) peak = 1.0;

    double cell_px = 640.0 / cells;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    for (int cj = 0; cj < cells; ++cj) {
        for (int ci = 0; ci < cells; ++ci) {
            // cell value: max magnitude over the covered nodes
            double m = 0.0;
            for (int j = cj * stride; j < std::min((cj + 1) * stride, g.n); ++j)
                for (int i = ci * stride; i < std::min((ci + 1) * stride, g.n); ++i)
                    m = std::max(m, std::abs(f.v[g.idx(i, j)]));
            int shade = 255 - static_cast<int>(std::lround(255.0 * m / peak));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, shade);
            // row 0 of the lattice is the bottom of the picture
            out += "<rect x=\"" + fmt(ci * cell_px) + "\" y=\"" +
                   fmt(640.0 - (cj + 1) * cell_px) + "\" width=\"" + fmt(cell_px + 0.5) +
                   "\" height=\"" + fmt(cell_px + 0.5) + "\" fill=\"" + color + "\"/>\n";
        }
    }
    // disc outline for orientation
    double r_px = 640.0 / (2.0 * g.half);
    out += "<circle cx=\"320\" cy=\"320\" r=\"" + fmt(r_px) +
           "\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"1.5\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace scatter
