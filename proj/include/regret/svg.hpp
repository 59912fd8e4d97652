#pragma once

#include <string>
#include <vector>

#include "regret/objectives.hpp"
#include "regret/regret_core.hpp"

namespace regret::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_y = false;
};

/// Line chart with a fixed 800x500 viewbox. On a log axis non-positive and
/// non-finite points are dropped.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& opts);

struct PathSeries {
  std::string name;
  Trajectory path;
};

/// 2-D objective contours (200x200 grid, 12 geometrically spaced levels,
/// marching squares) with the given paths drawn on top. The plotting window
/// covers all paths plus the optimum when known.
std::string path_overlay(const Objective& f, const std::vector<PathSeries>& paths,
                         const std::string& title);

}  // namespace regret::svg
