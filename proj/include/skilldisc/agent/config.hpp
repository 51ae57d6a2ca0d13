#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "skilldisc/agent/ppo.hpp"
#include "skilldisc/agent/selector.hpp"
#include "skilldisc/maze/maze.hpp"
#include "skilldisc/rewards/combine.hpp"
#include "skilldisc/surgery/surgery.hpp"

namespace skilldisc::agent {

struct EncoderConfig {
  int hidden = 128;
  int embed_dim = 16;
  int rnd_dim = 16;
  double temperature = 0.5;
  double lr = 3e-4;
  int batch_size = 256;
  int updates_per_iteration = 4;
  bool normalize_rewards = true;

  void validate() const;
};

struct BudgetConfig {
  int pretrain_iterations = 200;
  int eval_interval = 25;
  int eval_episodes_per_skill = 10;
  long finetune_steps = 100000;
  int finetune_eval_episodes = 100;

  void validate() const;
};

/// Everything a pretraining or fine-tuning run needs.
struct RunConfig {
  std::string maze = "tree7";
  int n_skills = 6;
  std::uint64_t seed = 1;
  std::string out_dir = "run";
  int workers = 1;
  bool log_timestamps = false;

  maze::EnvConfig env;
  std::optional<maze::Tile> goal_tile;  // unset: the layout's G tile
  double goal_radius = 0.5;

  int policy_hidden = 128;
  int policy_depth = 3;
  double init_log_std = -0.5;

  PpoConfig ppo;
  rewards::RewardWeights rewards;
  EncoderConfig encoders;
  bool diversity_stream = true;
  surgery::SurgeryConfig surgery;
  bool surgery_value_only = false;  // restrict projection to value-network parameters
  SelectorConfig selector;
  BudgetConfig budget;

  void validate() const;
};

}  // namespace skilldisc::agent
