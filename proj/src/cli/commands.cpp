#include "skilldisc/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "skilldisc/agent/train.hpp"
#include "skilldisc/cli/config_io.hpp"
#include "skilldisc/cli/metrics_log.hpp"
#include "skilldisc/cli/svg.hpp"
#include "skilldisc/io.hpp"
#include "skilldisc/metrics/evaluation.hpp"
#include "skilldisc/metrics/theorem.hpp"

namespace skilldisc::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Run configuration file");
  cmd->add_option("--seed", c.seed, "Random seed (overrides the config)");
  cmd->add_option("--out", c.out, "Output directory (overrides the config)");
  cmd->add_option("--workers", c.workers, "Parallel workers for rollouts and Monte Carlo trials");
}

agent::RunConfig resolve(const Common& c) {
  agent::RunConfig cfg = c.config_path.empty() ? agent::RunConfig{} : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.out_dir = *c.out;
  if (c.workers) cfg.workers = *c.workers;
  cfg.validate();
  return cfg;
}

std::string fmt(double x, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

void echo_config(std::ostream& out, const std::string& resolved) {
  out << "# resolved configuration\n" << resolved << "# end configuration\n";
}

std::string snapshot_name(long iteration) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "skills_%06ld.svg", iteration);
  return buf;
}

int cmd_pretrain(const Common& c, std::ostream& out) {
  const agent::RunConfig cfg = resolve(c);
  const std::string resolved = serialize_config(cfg);
  echo_config(out, resolved);
  const maze::MazeSpec spec = maze::load_maze_named_or_file(cfg.maze);
  const fs::path dir = cfg.out_dir;
  io::write_atomic(dir / "config.ini", resolved);

  MetricsWriter log(dir / "metrics.ndjson", make_run_id("pretrain", resolved), cfg.log_timestamps);
  const auto res = agent::pretrain(spec, cfg, [&](const MetricsRecord& r) {
    log.append(r);
    if (r.kind == "eval") {
      out << "eval iteration " << r.step;
      for (const auto& [k, v] : r.scalars) out << " " << k << "=" << fmt(v, "%.4f");
      out << "\n";
    }
  });
  for (const auto& snap : res.snapshots)
    io::write_atomic(dir / "snapshots" / snapshot_name(snap.iteration), render_trajectories(spec, snap.by_skill));
  res.checkpoint.save(dir / "checkpoint.ckpt");

  nlohmann::ordered_json summary;
  summary["iterations"] = cfg.budget.pretrain_iterations;
  summary["coverage"] = res.final_eval.coverage;
  summary["mutual_information"] = res.final_eval.mutual_information;
  summary["entropy_estimate"] = res.final_eval.entropy_estimate;
  summary["random_coverage"] = res.random_baseline.coverage;
  summary["random_mutual_information"] = res.random_baseline.mutual_information;
  summary["conflict_ratio"] = res.conflicts.steps_total > 0 ? surgery::conflict_ratio(res.conflicts) : 0.0;
  io::write_atomic(dir / "summary.json", summary.dump(2) + "\n");
  out << "coverage " << fmt(res.final_eval.coverage, "%.4f") << " mi " << fmt(res.final_eval.mutual_information, "%.4f")
      << " random_mi " << fmt(res.random_baseline.mutual_information, "%.4f") << " conflict_ratio "
      << fmt(summary["conflict_ratio"].get<double>(), "%.4f") << "\n";
  out << "wrote " << (dir / "checkpoint.ckpt").string() << "\n";
  return 0;
}

int cmd_finetune(const Common& c, const std::string& checkpoint, bool baseline, std::ostream& out) {
  const agent::RunConfig cfg = resolve(c);
  const std::string resolved = serialize_config(cfg);
  echo_config(out, resolved);
  const maze::MazeSpec spec = maze::load_maze_named_or_file(cfg.maze);
  const auto pre = diffnet::Checkpoint::load(checkpoint);
  const fs::path dir = cfg.out_dir;
  io::write_atomic(dir / "finetune_config.ini", resolved);
  const std::string tag = baseline ? "finetune_baseline" : "finetune";
  MetricsWriter log(dir / (tag + "_metrics.ndjson"), make_run_id(tag, resolved), cfg.log_timestamps);
  const auto res = agent::finetune(pre, spec, cfg,
                                   baseline ? agent::SkillChoice::uniform_per_episode : agent::SkillChoice::selector,
                                   [&](const MetricsRecord& r) { log.append(r); });
  res.checkpoint.save(dir / (tag + ".ckpt"));
  io::write_atomic(dir / (tag + "_eval.svg"), render_trajectories(spec, {res.eval_trajectories}));
  out << "success_rate " << fmt(res.success_rate, "%.4f") << "\n";
  out << "wrote " << (dir / (tag + ".ckpt")).string() << "\n";
  return 0;
}

int cmd_eval(const Common& c, const std::string& checkpoint, int episodes, std::ostream& out) {
  const agent::RunConfig cfg = resolve(c);
  const std::string resolved = serialize_config(cfg);
  echo_config(out, resolved);
  const maze::MazeSpec spec = maze::load_maze_named_or_file(cfg.maze);
  const auto ck = diffnet::Checkpoint::load(checkpoint);
  const agent::AgentNets nets = agent::agent_from_checkpoint(ck, cfg);
  const int per_skill = episodes > 0 ? episodes : cfg.budget.eval_episodes_per_skill;
  const auto ev = agent::evaluate_skills(spec, cfg.env, agent::stochastic_policy(nets), cfg.n_skills, per_skill,
                                         derive_seed(cfg.seed, 21), cfg.workers);
  const auto base = agent::evaluate_skills(spec, cfg.env, agent::random_policy(cfg.env.action_bound), cfg.n_skills,
                                           per_skill, derive_seed(cfg.seed, 22), cfg.workers);
  nlohmann::ordered_json j;
  j["coverage"] = ev.coverage;
  j["mutual_information"] = ev.mutual_information;
  j["entropy_estimate"] = ev.entropy_estimate;
  j["random_coverage"] = base.coverage;
  j["random_mutual_information"] = base.mutual_information;
  if (ck.has("selector_q")) {
    agent::SkillSelector sel;
    sel.n_skills = cfg.n_skills;
    sel.extent = nets.extent;
    sel.config = cfg.selector;
    sel.q = ck.network("selector_q");
    if (sel.q.spec.output_dim != cfg.n_skills) throw DimensionError("checkpoint/config mismatch in selector outputs");
    j["success_rate"] = agent::goal_success_rate(nets, &sel, spec, agent::goal_env(spec, cfg),
                                                 cfg.budget.finetune_eval_episodes, derive_seed(cfg.seed, 23),
                                                 cfg.workers);
  }
  const fs::path dir = cfg.out_dir;
  io::write_atomic(dir / "eval.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return 0;
}

std::vector<long> parse_grid(const std::string& text) {
  std::vector<long> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const long v = std::stol(item, &pos);
    if (pos != item.size() || v < 1) throw Error("--n-grid entries must be positive integers");
    grid.push_back(v);
  }
  if (grid.empty()) throw Error("--n-grid is empty");
  return grid;
}

struct TheoremArgs {
  int states = 2;
  int horizon = 1;
  int skills = 2;
  double peak = 0.8;
  double mix = 0.125;
  std::string n_grid = "5,10,20,40,80,160";
  long trials = 10000;
  double eta = 0.1;
};

int cmd_theorem(const Common& c, const TheoremArgs& a, std::ostream& out) {
  const std::uint64_t seed = c.seed.value_or(1);
  const int workers = c.workers.value_or(1);
  if (workers < 1) throw Error("--workers must be >= 1");
  if (a.trials < 1) throw Error("--trials must be >= 1");
  const fs::path dir = c.out.value_or("theorem");
  const auto inst = metrics::TheoremInstance::peaked(a.states, a.horizon, a.skills, a.peak, a.mix);
  Rng rng(seed);
  const auto rows = metrics::theorem_report(inst, parse_grid(a.n_grid), a.trials, a.eta, rng, workers);

  std::ostringstream csv;
  csv << "S,H,skills,delta,epsilon,margin,n,bound,log_bound,empirical,trials,half_width,sample_complexity\n";
  bool all_ok = true;
  for (const auto& r : rows) {
    csv << r.n_states << "," << r.horizon << "," << inst.skills.size() << "," << fmt(inst.delta) << ","
        << fmt(inst.epsilon) << "," << fmt(r.margin) << "," << r.n << "," << fmt(r.bound) << "," << fmt(r.log_bound)
        << "," << fmt(r.empirical) << "," << r.trials << "," << fmt(r.half_width) << ","
        << (r.at_sample_complexity ? 1 : 0) << "\n";
    all_ok = all_ok && r.empirical <= r.bound + r.half_width;
  }
  io::write_atomic(dir / "theorem_report.csv", csv.str());
  out << csv.str();
  out << "sample_complexity(eta=" << fmt(a.eta) << ") = "
      << metrics::sample_complexity(inst.margin, a.eta, a.states, a.horizon) << "\n";
  out << (all_ok ? "empirical rate within bound on every row\n" : "empirical rate exceeded the bound on some row\n");
  return 0;
}

struct ToyArgs {
  int dims = 5;
  int samples = 1000;
  int negatives = 4;
  double grid_min = 0.0;
  double grid_max = 5.0;
  int grid_points = 20;
};

int cmd_toy(const Common& c, const ToyArgs& a, std::ostream& out) {
  const fs::path dir = c.out.value_or("toy");
  Rng rng(c.seed.value_or(1));
  const auto grid = metrics::linspace(a.grid_min, a.grid_max, a.grid_points);
  const auto rows = metrics::gaussian_toy({a.dims, a.samples, a.negatives}, grid, rng);
  std::ostringstream csv;
  csv << "distance,mean_objective,std_objective\n";
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    csv << fmt(r.distance) << "," << fmt(r.mean_objective) << "," << fmt(r.std_objective) << "\n";
    xs.push_back(r.distance);
    ys.push_back(r.mean_objective);
  }
  io::write_atomic(dir / "toy_report.csv", csv.str());
  io::write_atomic(dir / "toy_plot.svg",
                   render_line_plot(xs, ys, "Diversity objective vs. mean distance", "distance", "mean objective"));
  out << csv.str();
  if (rows.size() >= 2) {
    const Vector x = Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size()));
    const Vector y = Eigen::Map<const Vector>(ys.data(), static_cast<Index>(ys.size()));
    out << "spearman " << fmt(metrics::spearman(x, y), "%.4f") << "\n";
  }
  return 0;
}

int cmd_render(const Common& c, const std::string& checkpoint, int episodes, std::ostream& out) {
  const agent::RunConfig cfg = resolve(c);
  const maze::MazeSpec spec = maze::load_maze_named_or_file(cfg.maze);
  std::vector<std::vector<maze::Trajectory>> by_skill;
  if (!checkpoint.empty()) {
    const auto ck = diffnet::Checkpoint::load(checkpoint);
    const agent::AgentNets nets = agent::agent_from_checkpoint(ck, cfg);
    by_skill = agent::evaluate_skills(spec, cfg.env, agent::stochastic_policy(nets), cfg.n_skills, episodes,
                                      derive_seed(cfg.seed, 31), cfg.workers)
                   .by_skill;
  }
  const fs::path file = fs::path(cfg.out_dir) / "skills.svg";
  io::write_atomic(file, render_trajectories(spec, by_skill));
  out << "wrote " << file.string() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skill discovery in 2-D mazes: pretraining, fine-tuning and theory checks"};
  app.require_subcommand(1);
  Common common;
  std::string checkpoint;
  bool baseline = false;
  int episodes = 0;
  TheoremArgs th;
  ToyArgs toy;

  auto* pre = app.add_subcommand("pretrain", "Unsupervised skill pretraining");
  add_common(pre, common);
  auto* fin = app.add_subcommand("finetune", "Goal-reaching fine-tuning from a pretrained checkpoint");
  add_common(fin, common);
  fin->add_option("--checkpoint", checkpoint, "Pretrained checkpoint")->required();
  fin->add_flag("--baseline", baseline, "Uniform skill per episode instead of the learned selector");
  auto* ev = app.add_subcommand("eval", "Coverage, mutual information and entropy of a checkpoint");
  add_common(ev, common);
  ev->add_option("--checkpoint", checkpoint, "Checkpoint to evaluate")->required();
  ev->add_option("--episodes", episodes, "Episodes per skill (default: budget.eval_episodes_per_skill)");
  auto* thm = app.add_subcommand("theorem", "Monte Carlo check of the skill misidentification bound");
  add_common(thm, common);
  thm->add_option("--states", th.states, "Number of states S");
  thm->add_option("--horizon", th.horizon, "Horizon H");
  thm->add_option("--skills", th.skills, "Number of skills");
  thm->add_option("--peak", th.peak, "Mass of each skill on its own trajectory");
  thm->add_option("--mix", th.mix, "Weight of skill 1 in the optimal distribution");
  thm->add_option("--n-grid", th.n_grid, "Comma-separated roll-out counts");
  thm->add_option("--trials", th.trials, "Monte Carlo trials per row");
  thm->add_option("--eta", th.eta, "Confidence level for the sample-complexity row");
  auto* ty = app.add_subcommand("toy-aninfonce", "Gaussian toy for the anisotropic contrastive objective");
  add_common(ty, common);
  ty->add_option("--dims", toy.dims, "Dimension");
  ty->add_option("--samples", toy.samples, "Tuples per distance");
  ty->add_option("--negatives", toy.negatives, "Negatives per tuple");
  ty->add_option("--grid-min", toy.grid_min, "Smallest distance");
  ty->add_option("--grid-max", toy.grid_max, "Largest distance");
  ty->add_option("--grid-points", toy.grid_points, "Number of distances");
  auto* rd = app.add_subcommand("render", "Render skill trajectories (or the bare maze) as SVG");
  add_common(rd, common);
  rd->add_option("--checkpoint", checkpoint, "Checkpoint whose skills are drawn");
  rd->add_option("--episodes", episodes, "Episodes per skill")->default_val(5);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (*pre) return cmd_pretrain(common, out);
    if (*fin) return cmd_finetune(common, checkpoint, baseline, out);
    if (*ev) return cmd_eval(common, checkpoint, episodes, out);
    if (*thm) return cmd_theorem(common, th, out);
    if (*ty) return cmd_toy(common, toy, out);
    if (*rd) return cmd_render(common, checkpoint, episodes, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace skilldisc::cli
