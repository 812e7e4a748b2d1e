#include "mevsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mevsim::svg {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

struct Bounds {
  double lo = 0.0, hi = 1.0;
};

Bounds data_bounds(const Plot& plot, bool x_axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Series& s : plot.series) {
    for (double v : x_axis ? s.x : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) return {lo - 0.5, hi + 0.5};
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

void render(std::ostream& os, const Plot& plot) {
  const int ml = 62, mr = 16, mt = 34, mb = 48;
  const double pw = plot.width - ml - mr;
  const double ph = plot.height - mt - mb;
  const Bounds bx = data_bounds(plot, true);
  const Bounds by = data_bounds(plot, false);
  const auto px = [&](double v) {
    return ml + pw * (v - bx.lo) / (bx.hi - bx.lo);
  };
  const auto py = [&](double v) {
    return mt + ph * (1.0 - (v - by.lo) / (by.hi - by.lo));
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width
     << "\" height=\"" << plot.height << "\" viewBox=\"0 0 " << plot.width
     << ' ' << plot.height << "\">\n";
  os << "<rect width=\"" << plot.width << "\" height=\"" << plot.height
     << "\" fill=\"white\"/>\n";

  // frame and ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = bx.lo + (bx.hi - bx.lo) * i / ticks;
    const double fy = by.lo + (by.hi - by.lo) * i / ticks;
    const double X = px(fx), Y = py(fy);
    os << "<line x1=\"" << num(X) << "\" y1=\"" << mt + ph << "\" x2=\""
       << num(X) << "\" y2=\"" << num(mt + ph + 5)
       << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << num(X) << "\" y=\"" << num(mt + ph + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << num(fx) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(Y) << "\" x2=\"" << ml
       << "\" y2=\"" << num(Y) << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << num(Y + 4)
       << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
       << num(fy) << "</text>\n";
  }

  if (!plot.title.empty())
    os << "<text x=\"" << plot.width / 2 << "\" y=\"20\" font-size=\"14\" "
          "text-anchor=\"middle\" font-family=\"sans-serif\">"
       << escape(plot.title) << "</text>\n";
  if (!plot.x_label.empty())
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << plot.height - 10
       << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << escape(plot.x_label) << "</text>\n";
  if (!plot.y_label.empty())
    os << "<text x=\"14\" y=\"" << mt + ph / 2
       << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\""
          " transform=\"rotate(-90 14 "
       << mt + ph / 2 << ")\">" << escape(plot.y_label) << "</text>\n";

  for (const Series& s : plot.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      }
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\""
           << num(py(s.y[i])) << "\" r=\"" << num(s.radius) << "\" fill=\""
           << s.color << "\"/>\n";
      }
    }
  }

  // legend
  int ly = mt + 14;
  for (const Series& s : plot.series) {
    if (s.label.empty()) continue;
    os << "<rect x=\"" << ml + 10 << "\" y=\"" << ly - 8
       << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << ml + 24 << "\" y=\"" << ly
       << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(s.label)
       << "</text>\n";
    ly += 15;
  }
  os << "</svg>\n";
}

}  // namespace mevsim::svg
