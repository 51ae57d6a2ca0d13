#include "skilldisc/maze/maze.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <sstream>

#include "skilldisc/io.hpp"

namespace skilldisc::maze {

namespace {

// Row 0 is the first text line; y grows downwards, matching SVG output.
constexpr const char* kTree7 =
    ".#.#.#G\n"
    ".#.#.#.\n"
    "...#...\n"
    "#.###.#\n"
    "#.....#\n"
    "###.###\n"
    "###S###\n";

constexpr const char* kSquare5 =
    ".....\n"
    ".#.#.\n"
    "..S..\n"
    ".#.#.\n"
    "....G\n";

}  // namespace

bool MazeSpec::is_blocked(int col, int row) const {
  if (col < 0 || row < 0 || col >= width || row >= height) return true;
  return blocked[static_cast<std::size_t>(row) * width + col];
}

int MazeSpec::free_tile_count() const {
  return static_cast<int>(std::count(blocked.begin(), blocked.end(), false));
}

Tile MazeSpec::tile_of(const Vector2& p) const {
  int c = static_cast<int>(std::floor(p.x()));
  int r = static_cast<int>(std::floor(p.y()));
  return {std::clamp(c, 0, width - 1), std::clamp(r, 0, height - 1)};
}

bool MazeSpec::in_free_region(const Vector2& p) const {
  if (!(p.x() >= 0.0 && p.x() <= width && p.y() >= 0.0 && p.y() <= height)) return false;
  return is_free(tile_of(p));
}

MazeSpec load_maze(const std::string& layout_text, const std::string& layout_name) {
  std::vector<std::string> rows;
  {
    std::istringstream is(layout_text);
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      rows.push_back(line);
    }
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
  }
  if (rows.empty()) throw ParseError("empty layout", 1, 1);
  MazeSpec spec;
  spec.layout_name = layout_name;
  spec.height = static_cast<int>(rows.size());
  spec.width = static_cast<int>(rows.front().size());
  if (spec.width == 0) throw ParseError("empty row", 1, 1);
  spec.blocked.assign(static_cast<std::size_t>(spec.width) * spec.height, false);
  int starts = 0;
  for (int r = 0; r < spec.height; ++r) {
    const std::string& row = rows[r];
    if (static_cast<int>(row.size()) != spec.width)
      throw ParseError("row has " + std::to_string(row.size()) + " tiles, expected " + std::to_string(spec.width),
                       r + 1, static_cast<int>(std::min(row.size(), static_cast<std::size_t>(spec.width))) + 1);
    for (int c = 0; c < spec.width; ++c) {
      switch (row[c]) {
        case '#': spec.blocked[static_cast<std::size_t>(r) * spec.width + c] = true; break;
        case '.': break;
        case 'S':
          if (++starts > 1) throw ParseError("second start marker", r + 1, c + 1);
          spec.start = {c, r};
          break;
        case 'G':
          if (spec.goal) throw ParseError("second goal marker", r + 1, c + 1);
          spec.goal = Tile{c, r};
          break;
        default: throw ParseError(std::string("unexpected character '") + row[c] + "'", r + 1, c + 1);
      }
    }
  }
  if (starts == 0) throw ParseError("missing start marker 'S'", spec.height, 1);

  // Connectivity of the free region.
  std::vector<bool> seen(spec.blocked.size(), false);
  std::deque<Tile> queue{spec.start};
  seen[spec.cell_index(spec.start)] = true;
  int reached = 0;
  while (!queue.empty()) {
    Tile t = queue.front();
    queue.pop_front();
    ++reached;
    const Tile nbrs[4] = {{t.col + 1, t.row}, {t.col - 1, t.row}, {t.col, t.row + 1}, {t.col, t.row - 1}};
    for (const Tile& n : nbrs) {
      if (spec.is_blocked(n.col, n.row) || seen[spec.cell_index(n)]) continue;
      seen[spec.cell_index(n)] = true;
      queue.push_back(n);
    }
  }
  if (reached != spec.free_tile_count()) {
    for (int r = 0; r < spec.height; ++r)
      for (int c = 0; c < spec.width; ++c)
        if (!spec.is_blocked(c, r) && !seen[spec.cell_index({c, r})])
          throw ParseError("free tile not connected to the start", r + 1, c + 1);
  }

  // Walls on every edge shared by a blocked and a free tile.
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      if (!spec.is_blocked(c, r)) continue;
      auto free_at = [&](int cc, int rr) {
        return cc >= 0 && rr >= 0 && cc < spec.width && rr < spec.height && !spec.is_blocked(cc, rr);
      };
      if (free_at(c - 1, r)) spec.walls.push_back({true, c, r});
      if (free_at(c + 1, r)) spec.walls.push_back({true, c + 1, r});
      if (free_at(c, r - 1)) spec.walls.push_back({false, c, r});
      if (free_at(c, r + 1)) spec.walls.push_back({false, c, r + 1});
    }
  }
  return spec;
}

std::string bundled_layout(const std::string& name) {
  if (name == "tree7") return kTree7;
  if (name == "square5") return kSquare5;
  throw Error("no bundled layout named '" + name + "'");
}

std::vector<std::string> bundled_layout_names() { return {"square5", "tree7"}; }

MazeSpec load_maze_named_or_file(const std::string& name_or_path) {
  for (const auto& n : bundled_layout_names())
    if (n == name_or_path) return load_maze(bundled_layout(n), n);
  std::filesystem::path p(name_or_path);
  if (!std::filesystem::exists(p)) throw Error("maze layout not found: " + name_or_path);
  return load_maze(io::read_file(p), p.stem().string());
}

void EnvConfig::validate() const {
  if (!(action_bound > 0.0)) throw Error("env.action_bound must be > 0");
  if (episode_length < 1) throw Error("env.episode_length must be >= 1");
  if (goal && !(goal->radius > 0.0)) throw Error("env.goal_radius must be > 0");
}

AgentState reset(const MazeSpec& spec, const EnvConfig&, Rng& rng) {
  std::uniform_real_distribution<double> u(kContactMargin, 1.0 - kContactMargin);
  double x = spec.start.col + u(rng);
  double y = spec.start.row + u(rng);
  return {Vector2(x, y)};
}

namespace {

// Smallest travel parameter t in (0, 1] at which p + t d meets an obstacle.
double first_hit(const MazeSpec& spec, const Vector2& p, const Vector2& d) {
  double best = 2.0;
  auto consider = [&](double t) {
    if (t > 0.0 && t <= 1.0 && t < best) best = t;
  };
  if (d.x() > 0.0) consider((spec.width - p.x()) / d.x());
  if (d.x() < 0.0) consider((0.0 - p.x()) / d.x());
  if (d.y() > 0.0) consider((spec.height - p.y()) / d.y());
  if (d.y() < 0.0) consider((0.0 - p.y()) / d.y());
  for (const WallSegment& w : spec.walls) {
    if (w.vertical) {
      if (d.x() == 0.0) continue;
      double t = (w.x - p.x()) / d.x();
      double y = p.y() + t * d.y();
      if (y >= w.y && y <= w.y + 1) consider(t);
    } else {
      if (d.y() == 0.0) continue;
      double t = (w.y - p.y()) / d.y();
      double x = p.x() + t * d.x();
      if (x >= w.x && x <= w.x + 1) consider(t);
    }
  }
  return best;
}

}  // namespace

StepResult step(const MazeSpec& spec, const EnvConfig& config, const AgentState& state, const Vector2& action) {
  if (!action.allFinite()) throw NonFiniteError("maze step: non-finite action");
  const double b = config.action_bound;
  const Vector2 d = action.cwiseMax(-b).cwiseMin(b);
  const Vector2& p = state.position;
  Vector2 next = p;
  const double len = d.norm();
  if (len > 0.0) {
    const double t = first_hit(spec, p, d);
    if (t > 1.0) {
      next = p + d;
    } else {
      const double travel = std::max(t * len - kContactMargin, 0.0);
      next = p + d * (travel / len);
    }
    if (!spec.in_free_region(next)) next = p;
  }
  StepResult out{{next}, 0.0};
  if (config.goal) {
    const Vector2 center = spec.tile_center(config.goal->tile);
    out.extrinsic_reward = (next - center).norm() <= config.goal->radius ? 1.0 : 0.0;
  }
  return out;
}

Trajectory rollout(const MazeSpec& spec, const EnvConfig& config, const Policy& policy, int skill, Rng& rng) {
  return rollout(spec, config, policy, [skill](const Vector2&, int, Rng&) { return skill; }, rng);
}

Trajectory rollout(const MazeSpec& spec, const EnvConfig& config, const Policy& policy,
                   const SkillChooser& choose_skill, Rng& rng) {
  Trajectory traj;
  traj.reserve(config.episode_length);
  AgentState s = reset(spec, config, rng);
  for (int t = 0; t < config.episode_length; ++t) {
    Transition tr;
    tr.state = s.position;
    tr.skill = choose_skill(s.position, t, rng);
    ActionSample a = policy(s.position, tr.skill, rng);
    StepResult r = step(spec, config, s, a.action);
    tr.action = a.action.cwiseMax(-config.action_bound).cwiseMin(config.action_bound);
    tr.next_state = r.next.position;
    tr.extrinsic_reward = r.extrinsic_reward;
    tr.done = t + 1 == config.episode_length;
    tr.latent = a.latent;
    tr.log_prob = a.log_prob;
    traj.push_back(tr);
    s = r.next;
  }
  return traj;
}

bool reached_goal(const Trajectory& traj) {
  return std::any_of(traj.begin(), traj.end(), [](const Transition& t) { return t.extrinsic_reward > 0.0; });
}

}  // namespace skilldisc::maze
