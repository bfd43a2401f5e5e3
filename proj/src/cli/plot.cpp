#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hsfw/cli/commands.hpp"

namespace hsfw::cli {

namespace {

constexpr double kWidth = 760, kHeight = 500;
constexpr double kLeft = 80, kRight = 190, kTop = 30, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
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

struct Range {
  int lo = 0, hi = 1;  // decades
};

Range decades(double mn, double mx) {
  Range r{static_cast<int>(std::floor(std::log10(mn))), static_cast<int>(std::ceil(std::log10(mx)))};
  if (r.hi <= r.lo) r.hi = r.lo + 1;
  return r;
}

}  // namespace

std::string render_loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                              const std::string& y_label) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("plot series length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) throw std::invalid_argument("log-log plot needs positive values");
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmax > 0.0)) xmin = 1.0, xmax = 10.0, ymin = 1.0, ymax = 10.0;
  const Range xr = decades(xmin, xmax), yr = decades(ymin, ymax);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (std::log10(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (std::log10(y) - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<g class=\"grid\" stroke=\"#dddddd\">\n";
  for (int e = xr.lo; e <= xr.hi; ++e) {
    const double x = kLeft + double(e - xr.lo) / (xr.hi - xr.lo) * pw;
    o << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\"" << num(x) << "\" y2=\"" << kTop + ph << "\"/>\n";
  }
  for (int e = yr.lo; e <= yr.hi; ++e) {
    const double y = kTop + ph - double(e - yr.lo) / (yr.hi - yr.lo) * ph;
    o << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << num(y) << "\"/>\n";
  }
  o << "</g>\n<g class=\"ticks\">\n";
  for (int e = xr.lo; e <= xr.hi; ++e) {
    const double x = kLeft + double(e - xr.lo) / (xr.hi - xr.lo) * pw;
    o << "<text x=\"" << num(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = yr.lo; e <= yr.hi; ++e) {
    const double y = kTop + ph - double(e - yr.lo) / (yr.hi - yr.lo) * ph;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    o << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[s % 10] << "\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      o << (i ? " " : "") << num(px(series[s].x[i])) << ',' << num(py(series[s].y[i]));
    o << "\"/>\n";
  }
  o << "<g class=\"legend\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(s);
    const double x = kLeft + pw + 15;
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 20) << "\" y2=\"" << num(y)
      << "\" stroke-width=\"2\" stroke=\"" << kPalette[s % 10] << "\"/>\n";
    o << "<text x=\"" << num(x + 26) << "\" y=\"" << num(y + 4) << "\">" << escape(series[s].label) << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace hsfw::cli
