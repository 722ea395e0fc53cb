#pragma once

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace evoclust {

struct PlotOptions {
    int width = 640;
    int height = 480;
    std::string x_label = "x";
    std::string y_label = "y";
    std::string title;
};

namespace detail {

inline std::string fmt2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace detail

// Renders a 2-d scatterplot as plain SVG 1.1 text, one marker shape and
// colour per cluster. Output is a pure function of the inputs.
inline std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<int>& labels, const PlotOptions& opt = {}) {
    if (x.size() != y.size() || x.size() != labels.size()) {
        throw std::invalid_argument("scatter_svg: x, y, labels must have equal lengths");
    }
    if (x.empty()) throw std::invalid_argument("scatter_svg: nothing to plot");

    static const char* kColors[] = {"#1b6ca8", "#d1495b", "#2e8b57",
                                    "#e28413", "#6a4c93", "#4f6d7a"};
    constexpr int kPalette = 6;

    const double xmin = *std::min_element(x.begin(), x.end());
    const double xmax = *std::max_element(x.begin(), x.end());
    const double ymin = *std::min_element(y.begin(), y.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    const double xpad = (xmax > xmin) ? 0.05 * (xmax - xmin) : 1.0;
    const double ypad = (ymax > ymin) ? 0.05 * (ymax - ymin) : 1.0;

    const double margin = 48.0;
    const double plot_w = opt.width - 2 * margin;
    const double plot_h = opt.height - 2 * margin;
    auto sx = [&](double v) {
        return margin + plot_w * (v - (xmin - xpad)) / ((xmax + xpad) - (xmin - xpad));
    };
    auto sy = [&](double v) {
        return opt.height - margin -
               plot_h * (v - (ymin - ypad)) / ((ymax + ypad) - (ymin - ypad));
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty()) {
        svg += "<text x=\"" + detail::fmt2(opt.width / 2.0) +
               "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"15\">" +
               detail::xml_escape(opt.title) + "</text>\n";
    }
    // frame
    svg += "<rect x=\"" + detail::fmt2(margin) + "\" y=\"" + detail::fmt2(margin) +
           "\" width=\"" + detail::fmt2(plot_w) + "\" height=\"" + detail::fmt2(plot_h) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    // axis labels and corner ticks
    svg += "<text x=\"" + detail::fmt2(opt.width / 2.0) + "\" y=\"" +
           detail::fmt2(opt.height - 10.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::xml_escape(opt.x_label) + "</text>\n";
    svg += "<text x=\"14\" y=\"" + detail::fmt2(opt.height / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 14 " +
           detail::fmt2(opt.height / 2.0) + ")\">" + detail::xml_escape(opt.y_label) +
           "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin - xpad + (xmax - xmin + 2 * xpad) * i / 4.0;
        const double fy = ymin - ypad + (ymax - ymin + 2 * ypad) * i / 4.0;
        svg += "<text x=\"" + detail::fmt2(sx(fx)) + "\" y=\"" +
               detail::fmt2(opt.height - margin + 16.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               detail::fmt_tick(fx) + "</text>\n";
        svg += "<text x=\"" + detail::fmt2(margin - 6.0) + "\" y=\"" +
               detail::fmt2(sy(fy) + 3.0) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
               detail::fmt_tick(fy) + "</text>\n";
    }

    for (std::size_t i = 0; i < x.size(); ++i) {
        const int cluster = std::max(0, labels[i]);
        const char* color = kColors[cluster % kPalette];
        const double px = sx(x[i]);
        const double py = sy(y[i]);
        switch (cluster % 3) {
            case 0:
                svg += "<circle cx=\"" + detail::fmt2(px) + "\" cy=\"" + detail::fmt2(py) +
                       "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";
                break;
            case 1:
                svg += "<rect x=\"" + detail::fmt2(px - 2.6) + "\" y=\"" +
                       detail::fmt2(py - 2.6) + "\" width=\"5.2\" height=\"5.2\" fill=\"" +
                       color + "\" fill-opacity=\"0.75\"/>\n";
                break;
            default:
                svg += "<path d=\"M " + detail::fmt2(px) + " " + detail::fmt2(py - 3.4) +
                       " L " + detail::fmt2(px - 3.0) + " " + detail::fmt2(py + 2.6) + " L " +
                       detail::fmt2(px + 3.0) + " " + detail::fmt2(py + 2.6) +
                       " Z\" fill=\"" + std::string(color) + "\" fill-opacity=\"0.75\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace evoclust
