#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmm::plot {

struct Trace {
  std::string label;
  std::vector<double> values;
};

struct PlotOptions {
  std::string title;
  int width = 960;
  int height = 540;
};

/// Self-contained SVG with one <polyline class="trace"> per trace and a legend.
/// Traces share the x axis (sample index) and a common y range.
void write_line_plot(std::ostream& out, const std::vector<Trace>& traces, const PlotOptions& opts);

}  // namespace rmm::plot
