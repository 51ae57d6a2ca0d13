#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skilldisc/common.hpp"

namespace skilldisc::maze {

/// Integer tile coordinate; tile (col, row) covers [col, col+1] x [row, row+1].
struct Tile {
  int col = 0;
  int row = 0;
  bool operator==(const Tile&) const = default;
};

/// Unit wall segment on a tile edge. A vertical segment lies on x = x,
/// spanning y in [y, y+1]; a horizontal one lies on y = y, spanning x in [x, x+1].
struct WallSegment {
  bool vertical = false;
  int x = 0;
  int y = 0;
  bool operator==(const WallSegment&) const = default;
};

/// Layout text: one character per tile, rows separated by newlines.
/// `#` blocked, `.` free, `S` start (free, exactly one), `G` default goal (free).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("maze layout " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct MazeSpec {
  int width = 0;
  int height = 0;
  std::vector<bool> blocked;  // row-major, width * height
  std::vector<WallSegment> walls;  // internal walls between free and blocked tiles
  Tile start;
  std::optional<Tile> goal;
  std::string layout_name;

  bool is_blocked(int col, int row) const;
  bool is_free(Tile t) const { return !is_blocked(t.col, t.row); }
  int free_tile_count() const;
  /// Tile containing `p`, with the far boundary folded into the last tile.
  Tile tile_of(const Vector2& p) const;
  /// Inside the outer box and in a free tile.
  bool in_free_region(const Vector2& p) const;
  int cell_index(Tile t) const { return t.row * width + t.col; }
  Vector2 tile_center(Tile t) const { return {t.col + 0.5, t.row + 0.5}; }
};

MazeSpec load_maze(const std::string& layout_text, const std::string& layout_name = "custom");

/// Layouts shipped with the library: "tree7", "square5".
std::string bundled_layout(const std::string& name);
std::vector<std::string> bundled_layout_names();

/// Bundled name, or otherwise a path to a layout file.
MazeSpec load_maze_named_or_file(const std::string& name_or_path);

struct GoalConfig {
  Tile tile;
  double radius = 0.5;
};

struct EnvConfig {
  double action_bound = 0.95;
  int episode_length = 50;
  std::optional<GoalConfig> goal;  // set => goal-reaching mode

  void validate() const;
};

struct AgentState {
  Vector2 position = Vector2::Zero();
};

constexpr double kContactMargin = 1e-6;

struct StepResult {
  AgentState next;
  double extrinsic_reward = 0.0;
};

AgentState reset(const MazeSpec& spec, const EnvConfig& config, Rng& rng);

/// Clips the action to the box, then moves along the segment until the first
/// wall or boundary crossing, stopping kContactMargin short of it.
StepResult step(const MazeSpec& spec, const EnvConfig& config, const AgentState& state, const Vector2& action);

/// What a policy emits for one step: the executed action plus whatever the
/// learner needs to score the sample later (pre-squash latent, log-density).
struct ActionSample {
  Vector2 action = Vector2::Zero();
  Vector2 latent = Vector2::Zero();
  double log_prob = 0.0;
};

struct Transition {
  Vector2 state = Vector2::Zero();
  Vector2 action = Vector2::Zero();  // clipped action actually executed
  Vector2 next_state = Vector2::Zero();
  int skill = 0;
  double extrinsic_reward = 0.0;
  bool done = false;
  Vector2 latent = Vector2::Zero();
  double log_prob = 0.0;
};

using Trajectory = std::vector<Transition>;

using Policy = std::function<ActionSample(const Vector2& state, int skill, Rng& rng)>;
/// Chooses the skill for step `t` given the current state.
using SkillChooser = std::function<int(const Vector2& state, int t, Rng& rng)>;

Trajectory rollout(const MazeSpec& spec, const EnvConfig& config, const Policy& policy, int skill, Rng& rng);
Trajectory rollout(const MazeSpec& spec, const EnvConfig& config, const Policy& policy,
                   const SkillChooser& choose_skill, Rng& rng);

/// Whether any step of the trajectory collected extrinsic reward.
bool reached_goal(const Trajectory& traj);

}  // namespace skilldisc::maze
