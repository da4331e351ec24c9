// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ideal/rollcall.hpp"

namespace ideal {

// Minimal deterministic SVG output: fixed canvas, data-space drawing,
// auto-ticked axes. Files are pure functions of their inputs.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel);

    void set_range(double xmin, double xmax, double ymin, double ymax);

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double width = 1.0, bool dashed = false);
    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double width = 1.5);
    void circle(double x, double y, double radius_px, const std::string& color);
    void rect(double x0, double y0, double x1, double y1, const std::string& fill);
    void label(double x, double y, const std::string& text, int px = 10,
               const std::string& anchor = "middle");

    void write(const std::string& path) const;

    double px_x(double x) const;
    double px_y(double y) const;

private:
    std::string title_, xlabel_, ylabel_;
    double xmin_ = 0, xmax_ = 1, ymin_ = 0, ymax_ = 1;
    std::string body_;
};

// Histogram with equal-width bins over the data range.
void write_histogram_svg(const std::string& path, const std::vector<double>& values,
                         int bins, const std::string& title, const std::string& xlabel);

// 2x2 grid of mini histograms, one per labelled series.
void write_hist_panel_svg(const std::string& path,
                          const std::vector<std::pair<std::string, std::vector<double>>>& panels,
                          const std::string& title);

// One box (five-number summary) per labelled group.
void write_box_svg(const std::string& path,
                   const std::vector<std::pair<std::string, FiveNum>>& groups,
                   const std::string& title, const std::string& ylabel);

void write_scatter_svg(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       bool with_diagonal);

// One polyline per chain.
void write_trace_svg(const std::string& path,
                     const std::vector<std::vector<double>>& series,
                     const std::string& title, const std::string& ylabel);

struct CaterpillarEntry {
    std::string label;
    double lo = 0, mid = 0, hi = 0;
    std::string color;
};

// Interval-per-row plot sorted by the caller; vertical zero line included.
void write_caterpillar_svg(const std::string& path,
                           const std::vector<CaterpillarEntry>& entries,
                           const std::string& title, const std::string& xlabel);

// Smoothed histogram outline of a draw set.
void write_density_svg(const std::string& path, const std::vector<double>& draws,
                       const std::string& title, const std::string& xlabel);

void write_roc_svg(const std::string& path,
                   const std::vector<std::pair<double, double>>& points, double auc);

void write_cooks_svg(const std::string& path, const std::vector<double>& d,
                     double threshold);

}  // namespace ideal
