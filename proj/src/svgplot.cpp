// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"

namespace ideal {

namespace {

constexpr double kW = 640, kH = 420;
constexpr double kLeft = 62, kRight = 18, kTop = 34, kBottom = 46;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b"};

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string f4g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// Tick step rounded to a 1/2/5 x 10^k ladder.
double nice_step(double range) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / 4.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac < 1.5) step = 1.0;
    else if (frac < 3.5) step = 2.0;
    else if (frac < 7.5) step = 5.0;
    else step = 10.0;
    return step * mag;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void SvgPlot::set_range(double xmin, double xmax, double ymin, double ymax) {
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    xmin_ = xmin;
    xmax_ = xmax;
    ymin_ = ymin;
    ymax_ = ymax;
}

double SvgPlot::px_x(double x) const {
    return kLeft + (x - xmin_) / (xmax_ - xmin_) * (kW - kLeft - kRight);
}

double SvgPlot::px_y(double y) const {
    return kH - kBottom - (y - ymin_) / (ymax_ - ymin_) * (kH - kTop - kBottom);
}

void SvgPlot::line(double x1, double y1, double x2, double y2, const std::string& color,
                   double width, bool dashed) {
    body_ += "<line x1=\"" + f2(px_x(x1)) + "\" y1=\"" + f2(px_y(y1)) + "\" x2=\"" +
             f2(px_x(x2)) + "\" y2=\"" + f2(px_y(y2)) + "\" stroke=\"" + color +
             "\" stroke-width=\"" + f2(width) + "\"" +
             (dashed ? " stroke-dasharray=\"5,4\"" : "") + "/>\n";
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts,
                       const std::string& color, double width) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             f2(width) + "\" points=\"";
    for (const auto& [x, y] : pts) body_ += f2(px_x(x)) + "," + f2(px_y(y)) + " ";
    body_ += "\"/>\n";
}

void SvgPlot::circle(double x, double y, double radius_px, const std::string& color) {
    body_ += "<circle cx=\"" + f2(px_x(x)) + "\" cy=\"" + f2(px_y(y)) + "\" r=\"" +
             f2(radius_px) + "\" fill=\"" + color + "\"/>\n";
}

void SvgPlot::rect(double x0, double y0, double x1, double y1, const std::string& fill) {
    const double px0 = px_x(x0), px1 = px_x(x1);
    const double py0 = px_y(y1), py1 = px_y(y0);  // y flips
    body_ += "<rect x=\"" + f2(std::min(px0, px1)) + "\" y=\"" + f2(std::min(py0, py1)) +
             "\" width=\"" + f2(std::fabs(px1 - px0)) + "\" height=\"" +
             f2(std::fabs(py1 - py0)) + "\" fill=\"" + fill +
             "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
}

void SvgPlot::label(double x, double y, const std::string& text, int px,
                    const std::string& anchor) {
    body_ += "<text x=\"" + f2(px_x(x)) + "\" y=\"" + f2(px_y(y)) + "\" font-size=\"" +
             std::to_string(px) + "\" text-anchor=\"" + anchor +
             "\" font-family=\"sans-serif\">" + xml_escape(text) + "</text>\n";
}

void SvgPlot::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
        << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
        << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";

    // frame
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight
        << "\" height=\"" << kH - kTop - kBottom
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // ticks
    const double xs = nice_step(xmax_ - xmin_);
    for (double t = std::ceil(xmin_ / xs) * xs; t <= xmax_ + 1e-9 * xs; t += xs) {
        const double px = px_x(t);
        out << "<line x1=\"" << f2(px) << "\" y1=\"" << kH - kBottom << "\" x2=\"" << f2(px)
            << "\" y2=\"" << kH - kBottom + 4 << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << f2(px) << "\" y=\"" << kH - kBottom + 16
            << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << f4g(std::fabs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    const double ys = nice_step(ymax_ - ymin_);
    for (double t = std::ceil(ymin_ / ys) * ys; t <= ymax_ + 1e-9 * ys; t += ys) {
        const double py = px_y(t);
        out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << f2(py) << "\" x2=\"" << kLeft
            << "\" y2=\"" << f2(py) << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << kLeft - 7 << "\" y=\"" << f2(py + 3)
            << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << f4g(std::fabs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }

    out << "<text x=\"" << kW / 2 << "\" y=\"20\" font-size=\"13\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-weight=\"bold\">" << xml_escape(title_)
        << "</text>\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << xml_escape(xlabel_) << "</text>\n";
    out << "<text x=\"14\" y=\"" << kH / 2
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 14 " << kH / 2 << ")\">" << xml_escape(ylabel_)
        << "</text>\n";

    out << body_;
    out << "</svg>\n";
    if (!out) throw ValidationError("write failed: " + path);
}

namespace {

struct Hist {
    std::vector<double> edges;   // bins+1
    std::vector<double> counts;  // bins
};

Hist make_hist(const std::vector<double>& values, int bins) {
    Hist h;
    if (values.empty() || bins < 1) return h;
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi <= lo) hi = lo + 1.0;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b)
        h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / bins;
    h.counts.assign(bins, 0.0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        h.counts[b] += 1.0;
    }
    return h;
}

}  // namespace

void write_histogram_svg(const std::string& path, const std::vector<double>& values,
                         int bins, const std::string& title, const std::string& xlabel) {
    const Hist h = make_hist(values, bins);
    SvgPlot p(title, xlabel, "count");
    if (h.counts.empty()) {
        p.set_range(0, 1, 0, 1);
        p.label(0.5, 0.5, "no data");
        p.write(path);
        return;
    }
    const double cmax = *std::max_element(h.counts.begin(), h.counts.end());
    p.set_range(h.edges.front(), h.edges.back(), 0.0, cmax * 1.06);
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        if (h.counts[b] > 0)
            p.rect(h.edges[b], 0.0, h.edges[b + 1], h.counts[b], "#7aa6d180");
    p.write(path);
}

void write_hist_panel_svg(const std::string& path,
                          const std::vector<std::pair<std::string, std::vector<double>>>& panels,
                          const std::string& title) {
    // four independent mini plots composed into one file
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    const double w = 900, h = 640;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
        << "<text x=\"" << w / 2 << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-weight=\"bold\">" << xml_escape(title)
        << "</text>\n";
    const double pw = 430, ph = 290;
    for (std::size_t k = 0; k < panels.size() && k < 4; ++k) {
        const double ox = 10 + (k % 2) * (pw + 20);
        const double oy = 36 + (k / 2) * (ph + 12);
        const Hist hist = make_hist(panels[k].second, 30);
        out << "<g transform=\"translate(" << ox << "," << oy << ")\">\n";
        out << "<rect x=\"40\" y=\"24\" width=\"" << pw - 56 << "\" height=\"" << ph - 66
            << "\" fill=\"none\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << pw / 2 << "\" y=\"16\" font-size=\"12\" "
            << "text-anchor=\"middle\" font-family=\"sans-serif\">"
            << xml_escape(panels[k].first) << "</text>\n";
        if (!hist.counts.empty()) {
            const double cmax =
                *std::max_element(hist.counts.begin(), hist.counts.end());
            const double lo = hist.edges.front(), hi = hist.edges.back();
            for (std::size_t b = 0; b < hist.counts.size(); ++b) {
                if (hist.counts[b] <= 0) continue;
                const double x0 = 40 + (hist.edges[b] - lo) / (hi - lo) * (pw - 56);
                const double x1 = 40 + (hist.edges[b + 1] - lo) / (hi - lo) * (pw - 56);
                const double bh = hist.counts[b] / (cmax * 1.06) * (ph - 66);
                out << "<rect x=\"" << f2(x0) << "\" y=\"" << f2(24 + (ph - 66) - bh)
                    << "\" width=\"" << f2(x1 - x0) << "\" height=\"" << f2(bh)
                    << "\" fill=\"#7aa6d180\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
            }
            out << "<text x=\"40\" y=\"" << ph - 28
                << "\" font-size=\"10\" font-family=\"sans-serif\">" << f4g(lo)
                << "</text>\n";
            out << "<text x=\"" << pw - 16 << "\" y=\"" << ph - 28
                << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">"
                << f4g(hi) << "</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    if (!out) throw ValidationError("write failed: " + path);
}

void write_box_svg(const std::string& path,
                   const std::vector<std::pair<std::string, FiveNum>>& groups,
                   const std::string& title, const std::string& ylabel) {
    SvgPlot p(title, "", ylabel);
    double lo = 1e300, hi = -1e300;
    for (const auto& [g, f] : groups) {
        if (f.count == 0) continue;
        lo = std::min(lo, f.min);
        hi = std::max(hi, f.max);
    }
    if (lo > hi) {
        lo = 0;
        hi = 1;
    }
    const double pad = 0.05 * (hi - lo + 1e-9);
    p.set_range(0.0, static_cast<double>(groups.size()), lo - pad, hi + pad);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto& f = groups[k].second;
        const double cx = static_cast<double>(k) + 0.5;
        if (f.count > 0) {
            p.line(cx, f.min, cx, f.q1, "#444444");
            p.line(cx, f.q3, cx, f.max, "#444444");
            p.rect(cx - 0.3, f.q1, cx + 0.3, f.q3, "#7aa6d180");
            p.line(cx - 0.3, f.median, cx + 0.3, f.median, "#d62728", 1.5);
            p.line(cx - 0.15, f.min, cx + 0.15, f.min, "#444444");
            p.line(cx - 0.15, f.max, cx + 0.15, f.max, "#444444");
        }
        p.label(cx, lo - pad * 0.2, groups[k].first, 9);
    }
    p.write(path);
}

void write_scatter_svg(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       bool with_diagonal) {
    SvgPlot p(title, xlabel, ylabel);
    double lo = 1e300, hi = -1e300;
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : y) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) {
        lo = 0;
        hi = 1;
    }
    const double pad = 0.06 * (hi - lo + 1e-9);
    p.set_range(lo - pad, hi + pad, lo - pad, hi + pad);
    if (with_diagonal) p.line(lo - pad, lo - pad, hi + pad, hi + pad, "#999999", 1.0, true);
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        p.circle(x[i], y[i], 2.5, "#1f77b4");
    p.write(path);
}

void write_trace_svg(const std::string& path,
                     const std::vector<std::vector<double>>& series,
                     const std::string& title, const std::string& ylabel) {
    SvgPlot p(title, "retained draw", ylabel);
    double lo = 1e300, hi = -1e300;
    std::size_t len = 0;
    for (const auto& s : series) {
        len = std::max(len, s.size());
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (lo > hi) {
        lo = 0;
        hi = 1;
    }
    const double pad = 0.05 * (hi - lo + 1e-9);
    p.set_range(0.0, static_cast<double>(len > 1 ? len - 1 : 1), lo - pad, hi + pad);
    for (std::size_t c = 0; c < series.size(); ++c) {
        std::vector<std::pair<double, double>> pts;
        // thin very long traces to keep files reviewable
        const std::size_t step = std::max<std::size_t>(1, series[c].size() / 2000);
        for (std::size_t s = 0; s < series[c].size(); s += step)
            pts.emplace_back(static_cast<double>(s), series[c][s]);
        p.polyline(pts, kPalette[c % 6], 1.0);
    }
    p.write(path);
}

void write_caterpillar_svg(const std::string& path,
                           const std::vector<CaterpillarEntry>& entries,
                           const std::string& title, const std::string& xlabel) {
    SvgPlot p(title, xlabel, "");
    double lo = 1e300, hi = -1e300;
    for (const auto& e : entries) {
        lo = std::min(lo, e.lo);
        hi = std::max(hi, e.hi);
    }
    if (lo > hi) {
        lo = 0;
        hi = 1;
    }
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
    const double pad = 0.05 * (hi - lo + 1e-9);
    p.set_range(lo - pad, hi + pad, 0.0, static_cast<double>(entries.size()));
    p.line(0.0, 0.0, 0.0, static_cast<double>(entries.size()), "#999999", 1.0, true);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        const double cy = static_cast<double>(k) + 0.5;
        p.line(e.lo, cy, e.hi, cy, e.color.empty() ? "#1f77b4" : e.color, 1.2);
        p.circle(e.mid, cy, 2.0, e.color.empty() ? "#1f77b4" : e.color);
    }
    p.write(path);
}

void write_density_svg(const std::string& path, const std::vector<double>& draws,
                       const std::string& title, const std::string& xlabel) {
    const Hist h = make_hist(draws, 40);
    SvgPlot p(title, xlabel, "density");
    if (h.counts.empty()) {
        p.set_range(0, 1, 0, 1);
        p.label(0.5, 0.5, "no data");
        p.write(path);
        return;
    }
    const double binw = h.edges[1] - h.edges[0];
    const double total = static_cast<double>(draws.size());
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(h.edges.front(), 0.0);
    double dmax = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double d = h.counts[b] / (total * binw);
        dmax = std::max(dmax, d);
        pts.emplace_back(0.5 * (h.edges[b] + h.edges[b + 1]), d);
    }
    pts.emplace_back(h.edges.back(), 0.0);
    p.set_range(h.edges.front(), h.edges.back(), 0.0, dmax * 1.08 + 1e-12);
    p.polyline(pts, "#1f77b4", 1.6);
    p.write(path);
}

void write_roc_svg(const std::string& path,
                   const std::vector<std::pair<double, double>>& points, double auc) {
    SvgPlot p("ROC curve (AUC = " + f4g(auc) + ")", "false positive rate",
              "true positive rate");
    p.set_range(0.0, 1.0, 0.0, 1.0);
    p.line(0.0, 0.0, 1.0, 1.0, "#999999", 1.0, true);
    p.polyline(points, "#d62728", 1.8);
    p.write(path);
}

void write_cooks_svg(const std::string& path, const std::vector<double>& d,
                     double threshold) {
    SvgPlot p("Cook's distance", "observation", "distance");
    double hi = threshold;
    for (double v : d) hi = std::max(hi, v);
    p.set_range(0.0, static_cast<double>(d.size() + 1), 0.0, hi * 1.08 + 1e-12);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        p.line(x, 0.0, x, d[i], "#1f77b4", 1.2);
        p.circle(x, d[i], 2.0, d[i] > threshold ? "#d62728" : "#1f77b4");
    }
    p.line(0.0, threshold, static_cast<double>(d.size() + 1), threshold, "#d62728", 1.0,
           true);
    p.write(path);
}

}  // namespace ideal
