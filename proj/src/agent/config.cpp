#include "skilldisc/agent/config.hpp"

namespace skilldisc::agent {

void EncoderConfig::validate() const {
  if (hidden < 1) throw Error("encoders.hidden must be >= 1");
  if (embed_dim < 1) throw Error("encoders.embed_dim must be >= 1");
  if (rnd_dim < 1) throw Error("encoders.rnd_dim must be >= 1");
  if (!(temperature > 0.0)) throw Error("encoders.temperature must be > 0");
  if (!(lr > 0.0)) throw Error("encoders.lr must be > 0");
  if (batch_size < 2) throw Error("encoders.batch_size must be >= 2");
  if (updates_per_iteration < 0) throw Error("encoders.updates_per_iteration must be >= 0");
}

void BudgetConfig::validate() const {
  if (pretrain_iterations < 0) throw Error("budget.pretrain_iterations must be >= 0");
  if (eval_interval < 1) throw Error("budget.eval_interval must be >= 1");
  if (eval_episodes_per_skill < 1) throw Error("budget.eval_episodes_per_skill must be >= 1");
  if (finetune_steps < 0) throw Error("budget.finetune_steps must be >= 0");
  if (finetune_eval_episodes < 1) throw Error("budget.finetune_eval_episodes must be >= 1");
}

void RunConfig::validate() const {
  if (maze.empty()) throw Error("run.maze must name a layout or a file");
  if (n_skills < 1) throw Error("run.n_skills must be >= 1");
  if (workers < 1) throw Error("run.workers must be >= 1");
  env.validate();
  if (env.goal) throw Error("env.goal is derived from goal_tile/goal_radius");
  if (!(goal_radius > 0.0)) throw Error("env.goal_radius must be > 0");
  if (policy_hidden < 1) throw Error("ppo.hidden must be >= 1");
  if (policy_depth < 1) throw Error("ppo.depth must be >= 1");
  ppo.validate();
  rewards.validate();
  encoders.validate();
  surgery.validate();
  if (surgery.slice) throw Error("surgery slice is chosen with surgery.value_only");
  selector.validate();
  budget.validate();
}

}  // namespace skilldisc::agent
