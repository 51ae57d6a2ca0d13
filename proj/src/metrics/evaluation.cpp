#include "skilldisc/metrics/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skilldisc/rewards/aninfonce.hpp"

namespace skilldisc::metrics {

SkillRunSummary::SkillRunSummary(int n_cells, int n_skills)
    : counts_(Matrix::Zero(n_cells, n_skills)), visited_(static_cast<std::size_t>(n_skills)) {
  if (n_cells < 1 || n_skills < 1) throw Error("summary needs at least one cell and one skill");
}

SkillRunSummary SkillRunSummary::for_maze(const maze::MazeSpec& spec, int n_skills) {
  return SkillRunSummary(spec.width * spec.height, n_skills);
}

void SkillRunSummary::add_visit(int cell, int skill, double count) {
  if (cell < 0 || cell >= n_cells()) throw DimensionError("summary: cell index out of range");
  if (skill < 0 || skill >= n_skills()) throw DimensionError("summary: skill index out of range");
  if (count < 0.0) throw Error("summary: negative count");
  counts_(cell, skill) += count;
  visited_[static_cast<std::size_t>(skill)].insert(cell);
}

void SkillRunSummary::add_trajectory(const maze::MazeSpec& spec, const maze::Trajectory& traj) {
  if (traj.empty()) return;
  const auto cell = [&](const Vector2& p) { return spec.cell_index(spec.tile_of(p)); };
  add_visit(cell(traj.front().state), traj.front().skill);
  for (const auto& tr : traj) add_visit(cell(tr.next_state), tr.skill);
}

double coverage(const SkillRunSummary& summary, const maze::MazeSpec& spec) {
  if (summary.n_cells() != spec.width * spec.height) throw DimensionError("coverage: summary does not match maze");
  std::set<int> all;
  for (int z = 0; z < summary.n_skills(); ++z) all.insert(summary.visited(z).begin(), summary.visited(z).end());
  int hit = 0;
  for (int c : all)
    if (spec.is_free({c % spec.width, c / spec.width})) ++hit;
  return static_cast<double>(hit) / static_cast<double>(spec.free_tile_count());
}

double plugin_mi(const Matrix& joint) {
  if ((joint.array() < 0.0).any()) throw Error("plugin_mi: negative count");
  const double total = joint.sum();
  if (!(total > 0.0)) throw Error("plugin_mi: empty count table");
  const Vector pc = joint.rowwise().sum() / total;
  const Vector pz = joint.colwise().sum().transpose() / total;
  double mi = 0.0;
  for (Index c = 0; c < joint.rows(); ++c)
    for (Index z = 0; z < joint.cols(); ++z) {
      const double p = joint(c, z) / total;
      if (p > 0.0) mi += p * std::log(p / (pc[c] * pz[z]));
    }
  return std::max(mi, 0.0);
}

double plugin_mi(const SkillRunSummary& summary) { return plugin_mi(summary.counts()); }

namespace {

Vector average_ranks(const Vector& x) {
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return x[a] < x[b]; });
  Vector ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw DimensionError("spearman: lengths differ");
  if (x.size() < 2) throw Error("spearman: need at least two points");
  const Vector rx = average_ranks(x).array() - average_ranks(x).mean();
  const Vector ry = average_ranks(y).array() - average_ranks(y).mean();
  const double den = std::sqrt(rx.squaredNorm() * ry.squaredNorm());
  if (!(den > 0.0)) throw Error("spearman: constant input");
  return rx.dot(ry) / den;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw Error("linspace: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return out;
}

std::vector<ToyRow> gaussian_toy(const ToyConfig& cfg, const std::vector<double>& grid, Rng& rng) {
  if (grid.empty()) throw Error("gaussian_toy: empty distance grid");
  if (cfg.dims < 1 || cfg.samples < 1 || cfg.negatives < 1) throw Error("gaussian_toy: invalid configuration");
  const Vector lambda = Vector::Ones(cfg.dims);
  const auto normal_vec = [&](int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = standard_normal(rng);
    return v;
  };

  std::vector<ToyRow> rows;
  for (double d : grid) {
    if (!(d >= 0.0)) throw Error("gaussian_toy: distances must be >= 0");
    const Vector mu1 = normal_vec(cfg.dims);
    Vector dir = normal_vec(cfg.dims);
    dir /= dir.norm();
    const Vector mu2 = mu1 + d * dir;

    Vector obj(cfg.samples);
    Matrix negs(cfg.dims, cfg.negatives);
    for (int s = 0; s < cfg.samples; ++s) {
      const Vector anchor = mu1 + normal_vec(cfg.dims);
      const Vector positive = mu1 + normal_vec(cfg.dims);
      for (int m = 0; m < cfg.negatives; ++m) negs.col(m) = mu2 + normal_vec(cfg.dims);
      obj[s] = rewards::aninfonce_objective(anchor, positive, negs, lambda);
    }
    ToyRow r;
    r.distance = d;
    r.mean_objective = obj.mean();
    r.std_objective = cfg.samples > 1 ? std::sqrt((obj.array() - r.mean_objective).square().sum() / (cfg.samples - 1)) : 0.0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace skilldisc::metrics
