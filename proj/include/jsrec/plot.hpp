#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace jsrec {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct AxesSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
};

// Deterministic line plot: fixed 800x600 viewBox, one polyline per series,
// legend in input order, ticks at round numbers. Identical inputs yield
// byte-identical output.
std::string render_plot_svg(const std::vector<PlotSeries>& series, const AxesSpec& axes);

void emit_plot(const std::vector<PlotSeries>& series, const AxesSpec& axes,
               const std::filesystem::path& path);

}  // namespace jsrec
