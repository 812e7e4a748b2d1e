#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mevsim::svg {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool line = false;  // polyline when true, scatter dots otherwise
  double radius = 0.8;
  std::string label;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 900;
  int height = 560;
  std::vector<Series> series;
};

// Self-contained static SVG: axes, ticks, dots/lines, no interactivity.
// Plots are a convenience view; the CSVs are the source of truth.
void render(std::ostream& os, const Plot& plot);

}  // namespace mevsim::svg
