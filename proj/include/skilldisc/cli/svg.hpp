#pragma once

#include <string>
#include <vector>

#include "skilldisc/maze/maze.hpp"

namespace skilldisc::cli {

/// Ten well-separated colours used for skills, cycled when there are more.
const std::vector<std::string>& default_palette();

struct SvgStyle {
  double scale = 40.0;   // pixels per tile
  double margin = 10.0;  // pixels around the maze
  std::vector<std::string> palette = default_palette();
};

/// Maze walls as line segments and one polyline per trajectory, coloured by
/// skill (the outer index). A trajectory's points are its first state
/// followed by every next state; position (x, y) maps to
/// (margin + scale x, margin + scale y). Throws on points outside the maze.
std::string render_trajectories(const maze::MazeSpec& spec,
                                const std::vector<std::vector<maze::Trajectory>>& by_skill,
                                const SvgStyle& style = {});

/// Single-series line plot with axes and tick labels.
std::string render_line_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title,
                             const std::string& x_label, const std::string& y_label);

}  // namespace skilldisc::cli
