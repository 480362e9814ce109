#include "jsrec/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "jsrec/errors.hpp"

namespace jsrec {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 80.0, kRight = 770.0, kTop = 50.0, kBottom = 540.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Round tick step: 1, 2 or 5 times a power of ten, aiming for ~6 intervals.
double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac <= 1.0) return mag;
  if (frac <= 2.0) return 2.0 * mag;
  if (frac <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_plot_svg(const std::vector<PlotSeries>& series, const AxesSpec& axes) {
  if (series.empty()) fail(ErrorCode::InvalidArgument, "no series to plot");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    if (s.points.empty())
      fail(ErrorCode::InvalidArgument, "series '" + s.label + "' is empty");
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x); xmax = std::max(xmax, x);
      ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
  if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }

  const double xstep = nice_step(xmax - xmin);
  const double ystep = nice_step(ymax - ymin);
  const double x0 = std::floor(xmin / xstep) * xstep;
  const double x1 = std::ceil(xmax / xstep) * xstep;
  const double y0 = std::floor(ymin / ystep) * ystep;
  const double y1 = std::ceil(ymax / ystep) * ystep;

  const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kRight - kLeft); };
  const auto py = [&](double y) { return kBottom - (y - y0) / (y1 - y0) * (kBottom - kTop); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
     << axes.title << "</text>\n";

  // Gridlines and ticks.
  for (double x = x0; x <= x1 + 0.5 * xstep; x += xstep) {
    os << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
       << fmt(px(x)) << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(kBottom + 20.0)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(x) << "</text>\n";
  }
  for (double y = y0; y <= y1 + 0.5 * ystep; y += ystep) {
    os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
       << fmt(kRight) << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fmt(kLeft - 8.0) << "\" y=\"" << fmt(py(y) + 4.0)
       << "\" text-anchor=\"end\" font-size=\"12\">" << fmt(y) << "</text>\n";
  }
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
     << fmt(kRight - kLeft) << "\" height=\"" << fmt(kBottom - kTop)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt((kLeft + kRight) / 2.0) << "\" y=\"575\" "
     << "text-anchor=\"middle\" font-size=\"14\">" << axes.xlabel << "</text>\n";
  os << "<text x=\"22\" y=\"" << fmt((kTop + kBottom) / 2.0)
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 22 "
     << fmt((kTop + kBottom) / 2.0) << ")\">" << axes.ylabel << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[i].points)
      os << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    os << "\"/>\n";
  }

  // Legend, input order.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << fmt(kRight - 150.0) << "\" y1=\"" << fmt(ly) << "\" x2=\""
       << fmt(kRight - 120.0) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt(kRight - 114.0) << "\" y=\"" << fmt(ly + 4.0)
       << "\" font-size=\"12\">" << series[i].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::vector<PlotSeries>& series, const AxesSpec& axes,
               const std::filesystem::path& path) {
  const std::string svg = render_plot_svg(series, axes);
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::IoError, "cannot open for writing: " + path.string());
  os << svg;
}

}  // namespace jsrec
