#pragma once

#include <set>
#include <vector>

#include "skilldisc/maze/maze.hpp"

namespace skilldisc::metrics {

/// Visited tiles and joint (cell, skill) visit counts gathered from rollouts.
class SkillRunSummary {
 public:
  SkillRunSummary(int n_cells, int n_skills);
  /// Sized for `spec` (one cell per tile).
  static SkillRunSummary for_maze(const maze::MazeSpec& spec, int n_skills);

  void add_visit(int cell, int skill, double count = 1.0);
  /// Records the initial state and every next state of the trajectory.
  void add_trajectory(const maze::MazeSpec& spec, const maze::Trajectory& traj);

  int n_cells() const { return static_cast<int>(counts_.rows()); }
  int n_skills() const { return static_cast<int>(counts_.cols()); }
  const Matrix& counts() const { return counts_; }  // cells x skills
  const std::set<int>& visited(int skill) const { return visited_.at(static_cast<std::size_t>(skill)); }
  double total() const { return counts_.sum(); }

 private:
  Matrix counts_;
  std::vector<std::set<int>> visited_;
};

/// Fraction of free tiles visited by the union of all skills.
double coverage(const SkillRunSummary& summary, const maze::MazeSpec& spec);

/// Plug-in mutual information I(cell; skill) in nats from a joint count table.
double plugin_mi(const Matrix& joint_counts);
double plugin_mi(const SkillRunSummary& summary);

/// Spearman rank correlation with average ranks for ties.
double spearman(const Vector& x, const Vector& y);

struct ToyRow {
  double distance = 0.0;
  double mean_objective = 0.0;
  double std_objective = 0.0;
};

struct ToyConfig {
  int dims = 5;
  int samples = 1000;
  int negatives = 4;
};

/// Anchors and positives from N(mu1, I), negatives from N(mu2, I) with
/// ||mu1 - mu2|| = d; reports the diversity objective with identity encoder
/// and identity metric for every d in the grid.
std::vector<ToyRow> gaussian_toy(const ToyConfig& config, const std::vector<double>& distance_grid, Rng& rng);

/// n evenly spaced points from a to b inclusive.
std::vector<double> linspace(double a, double b, int n);

}  // namespace skilldisc::metrics
