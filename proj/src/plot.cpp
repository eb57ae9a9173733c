#include "rmm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rmm/errors.hpp"

namespace rmm::plot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_line_plot(std::ostream& out, const std::vector<Trace>& traces, const PlotOptions& opts) {
  if (traces.empty()) throw ConfigError("write_line_plot: no traces");
  std::size_t len = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& t : traces) {
    len = std::max(len, t.values.size());
    for (double v : t.values) {
      if (!std::isfinite(v)) throw DataError("write_line_plot: non-finite value in trace " + t.label);
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (hi == lo) {
    hi += 1.0;
    lo -= 1.0;
  }

  const double left = 60.0;
  const double right = 160.0;
  const double top = 40.0;
  const double bottom = 40.0;
  const double pw = opts.width - left - right;
  const double ph = opts.height - top - bottom;
  auto sx = [&](std::size_t i) { return left + (len > 1 ? pw * static_cast<double>(i) / static_cast<double>(len - 1) : 0.0); };
  auto sy = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  out << "  <title>" << escape(opts.title) << "</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << num(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape(opts.title) << "</text>\n";
  out << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out << "    <line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw) << "\" y2=\""
      << num(top + ph) << "\"/>\n";
  out << "    <line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
      << num(top + ph) << "\"/>\n";
  if (lo < 0.0 && hi > 0.0) {
    out << "    <line x1=\"" << num(left) << "\" y1=\"" << num(sy(0.0)) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(sy(0.0)) << "\" stroke-dasharray=\"4 4\" stroke=\"#999999\"/>\n";
  }
  out << "  </g>\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", hi);
  out << "  <text x=\"4\" y=\"" << num(top + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.3g", lo);
  out << "  <text x=\"4\" y=\"" << num(top + ph) << "\" font-family=\"sans-serif\" font-size=\"11\">" << buf << "</text>\n";
  out << "  <text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opts.height - 10.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">lag index (oldest to newest)</text>\n";

  for (std::size_t k = 0; k < traces.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    out << "  <polyline class=\"trace\" data-label=\"" << escape(traces[k].label) << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < traces[k].values.size(); ++i)
      out << (i ? " " : "") << num(sx(i)) << ',' << num(sy(traces[k].values[i]));
    out << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(k) + 8.0;
    out << "  <line class=\"legend\" x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(left + pw + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "  <text class=\"label\" x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(traces[k].label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace rmm::plot
