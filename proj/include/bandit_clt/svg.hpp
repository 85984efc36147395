#pragma once

// Minimal static SVG plots: one bar chart per histogram, line charts for ratio curves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace bandit_clt::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
inline const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                      "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string tick(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline void header(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
}

inline void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  const double bx = kLeft, by = kHeight - kBottom, ex = kWidth - kRight;
  os << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << ex << "\" y2=\"" << by
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << kTop
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    os << "<text x=\"" << f.px(xv) << "\" y=\"" << by + 16 << "\" text-anchor=\"middle\">" << tick(xv)
       << "</text>\n"
       << "<text x=\"" << bx - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">" << tick(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << (bx + ex) / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(xlabel) << "</text>\n"
     << "<text transform=\"translate(16," << (kTop + by) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(ylabel) << "</text>\n";
}

}  // namespace detail

/// Unit-width bars, one per histogram bin.
inline std::string bar_chart(const std::map<std::int64_t, std::uint64_t>& bins, const std::string& title,
                             const std::string& xlabel, const std::string& ylabel = "count") {
  using namespace detail;
  std::ostringstream os;
  header(os, title);
  if (bins.empty()) {
    os << "</svg>\n";
    return os.str();
  }
  std::uint64_t top = 0;
  for (const auto& [v, c] : bins) top = std::max(top, c);
  const Frame f{static_cast<double>(bins.begin()->first), static_cast<double>(bins.rbegin()->first) + 1.0, 0.0,
                static_cast<double>(top)};
  const double w = std::max(0.5, f.px(f.x0 + 1.0) - f.px(f.x0));
  for (const auto& [v, c] : bins) {
    const double x = f.px(static_cast<double>(v));
    const double y = f.py(static_cast<double>(c));
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << f.py(0.0) - y
       << "\" fill=\"#1f77b4\"/>\n";
  }
  axes(os, f, xlabel, ylabel);
  os << "</svg>\n";
  return os.str();
}

/// Polylines with markers and a legend. `reference` draws a dashed horizontal line (NaN: none).
inline std::string line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& xlabel, const std::string& ylabel, double reference = NAN) {
  using namespace detail;
  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (std::isfinite(reference)) {
    y0 = std::min(y0, reference);
    y1 = std::max(y1, reference);
  }
  std::ostringstream os;
  header(os, title);
  if (!(x0 <= x1)) {
    os << "</svg>\n";
    return os.str();
  }
  if (x0 == x1) x1 = x0 + 1.0;
  const double pad = y1 > y0 ? 0.05 * (y1 - y0) : 0.5;
  const Frame f{x0, x1, y0 - pad, y1 + pad};
  if (std::isfinite(reference)) {
    os << "<line x1=\"" << f.px(x0) << "\" y1=\"" << f.py(reference) << "\" x2=\"" << f.px(x1) << "\" y2=\""
       << f.py(reference) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.y[i])) os << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << "<circle cx=\"" << f.px(s.x[i]) << "\" cy=\"" << f.py(s.y[i]) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    }
    const double ly = kTop + 8 + 16.0 * static_cast<double>(k);
    os << "<rect x=\"" << kWidth - 190 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\"" << color
       << "\"/>\n<text x=\"" << kWidth - 175 << "\" y=\"" << ly + 1 << "\">" << escape(s.label) << "</text>\n";
  }
  axes(os, f, xlabel, ylabel);
  os << "</svg>\n";
  return os.str();
}

}  // namespace bandit_clt::svg
