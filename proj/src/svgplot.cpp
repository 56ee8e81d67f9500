#include "navsim/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

constexpr int kWidth = 720, kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
                          "#98df8a"};
constexpr int kPaletteSize = 13;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double span = hi - lo;
        lo -= 0.02 * span;
        hi += 0.02 * span;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

void emit_frame(std::ostream& os, const std::string& title, const std::string& x_label,
                const std::string& y_label, const Range& xr, const Range& yr, bool log_y) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n"
       << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
       << kWidth - kMarginL - kMarginR << "\" height=\"" << kHeight - kMarginT - kMarginB
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double fx = static_cast<double>(k) / ticks;
        const double xpix = kMarginL + fx * (kWidth - kMarginL - kMarginR);
        const double xval = xr.lo + fx * (xr.hi - xr.lo);
        os << "<line x1=\"" << xpix << "\" y1=\"" << kHeight - kMarginB << "\" x2=\"" << xpix
           << "\" y2=\"" << kHeight - kMarginB + 5 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << xpix << "\" y=\"" << kHeight - kMarginB + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt(xval) << "</text>\n";
        const double ypix = kHeight - kMarginB - fx * (kHeight - kMarginT - kMarginB);
        const double yval = yr.lo + fx * (yr.hi - yr.lo);
        os << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << ypix << "\" x2=\"" << kMarginL
           << "\" y2=\"" << ypix << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << kMarginL - 8 << "\" y=\"" << ypix + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << (log_y ? "1e" + fmt(yval) : fmt(yval)) << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
       << "</text>\n"
       << "<text x=\"16\" y=\"" << kHeight / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label << "</text>\n";
}

double to_px_x(double v, const Range& r) {
    return kMarginL + (v - r.lo) / (r.hi - r.lo) * (kWidth - kMarginL - kMarginR);
}
double to_px_y(double v, const Range& r) {
    return kHeight - kMarginB - (v - r.lo) / (r.hi - r.lo) * (kHeight - kMarginT - kMarginB);
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool log_y) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");

    auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-16)) : v; };
    Range xr, yr;
    for (const SvgSeries& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            xr.add(s.x[k]);
            yr.add(ty(s.y[k]));
        }
    xr.pad();
    yr.pad();

    emit_frame(os, title, x_label, y_label, xr, yr, log_y);

    int color = 0;
    int legend_y = kMarginT + 14;
    for (const SvgSeries& s : series) {
        const char* c = kPalette[color % kPaletteSize];
        ++color;
        os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
        for (std::size_t k = 0; k < s.x.size(); k += stride)
            os << fmt(to_px_x(s.x[k], xr)) << "," << fmt(to_px_y(ty(s.y[k]), yr)) << " ";
        os << "\"/>\n";
        if (!s.label.empty()) {
            os << "<line x1=\"" << kWidth - 170 << "\" y1=\"" << legend_y << "\" x2=\""
               << kWidth - 145 << "\" y2=\"" << legend_y << "\" stroke=\"" << c
               << "\" stroke-width=\"2\"/>\n"
               << "<text x=\"" << kWidth - 140 << "\" y=\"" << legend_y + 4
               << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    os << "</svg>\n";
}

void write_trajectory_plot(const std::filesystem::path& path, const std::string& title,
                           const RunLog& log) {
    std::vector<SvgSeries> series;
    SvgSeries nav;
    nav.label = "navigator";
    for (std::size_t k = 0; k < log.rows(); ++k) {
        nav.x.push_back(log.nav[k].y.x());
        nav.y.push_back(log.nav[k].y.y());
    }
    series.push_back(std::move(nav));
    for (int i = 0; i < log.m; ++i) {
        SvgSeries s;
        if (i < 3) s.label = "vehicle " + std::to_string(i + 1);
        for (std::size_t k = 0; k < log.rows(); ++k) {
            s.x.push_back(log.states[k][i].px);
            s.y.push_back(log.states[k][i].py);
        }
        series.push_back(std::move(s));
    }
    write_line_chart(path, title, "x [m]", "y [m]", series, false);
}

}  // namespace navsim
