#include "rodbif/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rodbif {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    void take(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo > hi) { lo = 0.0; hi = 1.0; }
        if (hi - lo < 1e-300) { lo -= 0.5; hi += 0.5; }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    const double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / target)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (span / (step * m) <= target) { step *= m; break; }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

void draw_frame(std::ostream& out, double x0, double y0, double w, double h,
                const Range& rx, const Range& ry, const std::string& xlabel,
                const std::string& ylabel, double font) {
    const auto mapx = [&](double v) { return x0 + (v - rx.lo) / (rx.hi - rx.lo) * w; };
    const auto mapy = [&](double v) { return y0 + h - (v - ry.lo) / (ry.hi - ry.lo) * h; };
    out << "<rect x='" << num(x0) << "' y='" << num(y0) << "' width='" << num(w)
        << "' height='" << num(h) << "' fill='none' stroke='black'/>\n";
    for (double t : nice_ticks(rx.lo, rx.hi)) {
        const double px = mapx(t);
        out << "<line x1='" << num(px) << "' y1='" << num(y0 + h) << "' x2='" << num(px)
            << "' y2='" << num(y0 + h + 5) << "' stroke='black'/>\n";
        out << "<text x='" << num(px) << "' y='" << num(y0 + h + 6 + font)
            << "' font-size='" << num(font) << "' text-anchor='middle'>" << num(t)
            << "</text>\n";
    }
    for (double t : nice_ticks(ry.lo, ry.hi)) {
        const double py = mapy(t);
        out << "<line x1='" << num(x0 - 5) << "' y1='" << num(py) << "' x2='" << num(x0)
            << "' y2='" << num(py) << "' stroke='black'/>\n";
        out << "<text x='" << num(x0 - 8) << "' y='" << num(py + font / 3)
            << "' font-size='" << num(font) << "' text-anchor='end'>" << num(t)
            << "</text>\n";
    }
    out << "<text x='" << num(x0 + w / 2) << "' y='" << num(y0 + h + 6 + 2.4 * font)
        << "' font-size='" << num(font) << "' text-anchor='middle'>" << xlabel
        << "</text>\n";
    out << "<text x='" << num(x0 - 48) << "' y='" << num(y0 + h / 2) << "' font-size='"
        << num(font) << "' text-anchor='middle' transform='rotate(-90 " << num(x0 - 48) << ' '
        << num(y0 + h / 2) << ")'>" << ylabel << "</text>\n";
}

void draw_series(std::ostream& out, double x0, double y0, double w, double h,
                 const Range& rx, const Range& ry, const std::vector<double>& xs,
                 const std::vector<double>& ys, const std::string& color, bool dashed,
                 bool markers) {
    const auto mapx = [&](double v) { return x0 + (v - rx.lo) / (rx.hi - rx.lo) * w; };
    const auto mapy = [&](double v) { return y0 + h - (v - ry.lo) / (ry.hi - ry.lo) * h; };
    if (markers) {
        for (size_t i = 0; i < xs.size(); ++i)
            out << "<circle cx='" << num(mapx(xs[i])) << "' cy='" << num(mapy(ys[i]))
                << "' r='3' fill='" << color << "'/>\n";
        return;
    }
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'";
    if (dashed) out << " stroke-dasharray='6,4'";
    out << " points='";
    for (size_t i = 0; i < xs.size(); ++i)
        out << num(mapx(xs[i])) << ',' << num(mapy(ys[i])) << ' ';
    out << "'/>\n";
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void SvgPlot::add_polyline(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& color, bool dashed, const std::string& label) {
    if (x.size() != y.size()) throw std::invalid_argument("SvgPlot: size mismatch");
    series_.push_back({x, y, color, dashed, false, label});
}

void SvgPlot::add_markers(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& color, const std::string& label) {
    if (x.size() != y.size()) throw std::invalid_argument("SvgPlot: size mismatch");
    series_.push_back({x, y, color, false, true, label});
}

std::string SvgPlot::render() const {
    Range rx, ry;
    for (const auto& s : series_) {
        for (double v : s.x) rx.take(v);
        for (double v : s.y) ry.take(v);
    }
    rx.pad();
    ry.pad();

    const double x0 = 90, y0 = 50, w = kWidth - 140, h = kHeight - 130;
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 800 600'>\n";
    out << "<rect width='800' height='600' fill='white'/>\n";
    out << "<text x='" << num(kWidth / 2)
        << "' y='30' font-size='18' text-anchor='middle'>" << title_ << "</text>\n";
    draw_frame(out, x0, y0, w, h, rx, ry, xlabel_, ylabel_, 13);
    for (const auto& s : series_)
        draw_series(out, x0, y0, w, h, rx, ry, s.x, s.y, s.color, s.dashed, s.markers);

    double ly = y0 + 14;
    for (const auto& s : series_) {
        if (s.label.empty()) continue;
        if (s.markers) {
            out << "<circle cx='" << num(x0 + w - 150) << "' cy='" << num(ly - 4)
                << "' r='3' fill='" << s.color << "'/>\n";
        } else {
            out << "<line x1='" << num(x0 + w - 160) << "' y1='" << num(ly - 4) << "' x2='"
                << num(x0 + w - 136) << "' y2='" << num(ly - 4) << "' stroke='" << s.color
                << "' stroke-width='1.5'"
                << (s.dashed ? " stroke-dasharray='6,4'" : "") << "/>\n";
        }
        out << "<text x='" << num(x0 + w - 130) << "' y='" << num(ly)
            << "' font-size='13'>" << s.label << "</text>\n";
        ly += 18;
    }
    out << "</svg>\n";
    return out.str();
}

void SvgPlot::write(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write SVG: " + file.string());
    out << render();
}

std::string render_projections(const std::string& title,
                               const std::vector<ProjectedCurve>& curves) {
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 800 600'>\n";
    out << "<rect width='800' height='600' fill='white'/>\n";
    out << "<text x='400' y='26' font-size='18' text-anchor='middle'>" << title
        << "</text>\n";

    struct Panel {
        const char* xlab;
        const char* ylab;
        int ax, ay;
    };
    const Panel panels[3] = {{"x", "y", 0, 1}, {"x", "z", 0, 2}, {"y", "z", 1, 2}};
    const double pw = 220, ph = 420, gap = 40, y0 = 70;

    for (int p = 0; p < 3; ++p) {
        const double x0 = 50 + p * (pw + gap);
        Range rx, ry;
        for (const auto& c : curves) {
            const std::vector<double>* comps[3] = {&c.x, &c.y, &c.z};
            for (double v : *comps[panels[p].ax]) rx.take(v);
            for (double v : *comps[panels[p].ay]) ry.take(v);
        }
        rx.pad();
        ry.pad();
        draw_frame(out, x0, y0, pw, ph, rx, ry, panels[p].xlab, panels[p].ylab, 11);
        for (const auto& c : curves) {
            const std::vector<double>* comps[3] = {&c.x, &c.y, &c.z};
            draw_series(out, x0, y0, pw, ph, rx, ry, *comps[panels[p].ax],
                        *comps[panels[p].ay], c.color, c.dashed, false);
        }
    }

    double ly = 580;
    double lx = 60;
    for (const auto& c : curves) {
        if (c.label.empty()) continue;
        out << "<line x1='" << num(lx) << "' y1='" << num(ly - 4) << "' x2='" << num(lx + 24)
            << "' y2='" << num(ly - 4) << "' stroke='" << c.color << "' stroke-width='1.5'"
            << (c.dashed ? " stroke-dasharray='6,4'" : "") << "/>\n";
        out << "<text x='" << num(lx + 30) << "' y='" << num(ly) << "' font-size='13'>"
            << c.label << "</text>\n";
        lx += 200;
    }
    out << "</svg>\n";
    return out.str();
}

void write_projections(const std::string& title, const std::vector<ProjectedCurve>& curves,
                       const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write SVG: " + file.string());
    out << render_projections(title, curves);
}

}  // namespace rodbif
