#pragma once

#include <vector>

#include "skilldisc/agent/policy.hpp"
#include "skilldisc/diffnet/adam.hpp"
#include "skilldisc/surgery/surgery.hpp"

namespace skilldisc::agent {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.98;
  double entropy_coef = 0.025;
  double lr = 3e-4;
  double clip_ratio = 0.2;
  int epochs_per_update = 50;
  int rollouts_per_update = 24;
  double value_coef = 0.5;
  bool normalize_advantages = true;

  void validate() const;
};

/// Advantages over one episode that ends in a terminal state (value 0):
/// delta_t = r_t + gamma V_{t+1} - V_t,  A_t = delta_t + gamma lambda A_{t+1}.
Vector gae_advantages(const Vector& rewards, const Vector& values, double gamma, double lambda);

/// Transitions of several episodes laid out column by column.
struct PpoBatch {
  Matrix inputs;        // policy inputs, (2 + n_skills) x N
  Matrix latents;       // sampled pre-squash actions, 2 x N
  Vector old_log_prob;  // N
  std::vector<std::pair<Index, Index>> episodes;  // (first column, length)

  Index size() const { return inputs.cols(); }
};

PpoBatch make_ppo_batch(const AgentNets& nets, const std::vector<maze::Trajectory>& trajectories);

/// Advantage and return targets of one reward stream, read from value head `head`.
struct StreamTargets {
  Vector advantages;  // normalised when the config asks for it
  Vector returns;     // raw advantages + values
  int head = 0;
};

/// `values` holds the chosen head's predictions for every column.
StreamTargets stream_targets(const PpoBatch& batch, const Vector& rewards, const Vector& values, int head,
                             const PpoConfig& config);

StreamTargets stream_targets(const AgentNets& nets, const PpoBatch& batch, const Vector& rewards, int head,
                             const PpoConfig& config);

/// Loss of one stream:
///   -mean min(ratio A, clip(ratio) A) + value_coef mean (V_head - R)^2 - entropy_coef H
/// with its gradient over the flat agent parameters.
struct StreamLoss {
  double loss = 0.0;
  double surrogate = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  Vector grad;
};

/// Evaluates every requested stream on a shared forward pass.
std::vector<StreamLoss> ppo_stream_losses(const AgentNets& nets, const PpoBatch& batch,
                                          const std::vector<const StreamTargets*>& streams, const PpoConfig& config);

struct PpoUpdateStats {
  surgery::ConflictStats conflicts;
  std::vector<double> dots;  // per epoch; empty in single-stream mode
  StreamLoss last_exploration;
  StreamLoss last_diversity;
};

/// One PPO update. Each epoch combines the exploration and diversity
/// gradients through gradient surgery and takes one Adam step. With
/// `diversity` null the exploration gradient is applied on its own.
PpoUpdateStats ppo_update_with_surgery(AgentNets& nets, diffnet::AdamState& opt, const PpoBatch& batch,
                                       const StreamTargets& exploration, const StreamTargets* diversity,
                                       const PpoConfig& config, const surgery::SurgeryConfig& surgery_config,
                                       Rng& rng);

/// Plain single-objective PPO update.
PpoUpdateStats ppo_update_reference(AgentNets& nets, diffnet::AdamState& opt, const PpoBatch& batch,
                                    const StreamTargets& targets, const PpoConfig& config);

}  // namespace skilldisc::agent
