#pragma once

#include <vector>

#include "skilldisc/diffnet/mlp.hpp"
#include "skilldisc/maze/maze.hpp"

namespace skilldisc::agent {

/// Maze position mapped to [-1, 1]^2.
Vector2 observe(const Vector2& position, const Vector2& extent);

/// Skill-conditioned Gaussian policy and the two-headed value network.
///
/// The policy network outputs the mean of a Gaussian over a latent u; the
/// executed action is bound * tanh(u), so every action (sampled or mean)
/// stays inside the action box. Log-densities are taken in latent space,
/// where the squashing Jacobian cancels in PPO ratios.
///
/// Value head 0 estimates the exploration stream (and the extrinsic reward
/// during fine-tuning), head 1 the diversity stream.
///
/// Flat parameter layout used for gradients: [policy | log_std | value].
struct AgentNets {
  int n_skills = 0;
  Vector2 extent = Vector2::Ones();
  double action_bound = 0.95;
  diffnet::Network policy;
  Vector log_std;
  diffnet::Network value;

  static AgentNets make(int n_skills, const Vector2& extent, double action_bound, int hidden, int depth,
                        double init_log_std, Rng& rng);

  int input_dim() const { return 2 + n_skills; }
  Index size() const { return policy.size() + log_std.size() + value.size(); }
  Index log_std_offset() const { return policy.size(); }
  Index value_offset() const { return policy.size() + log_std.size(); }
  Vector flat() const;
  void set_flat(const Vector& flat);
};

/// [observe(position); one_hot(skill)].
Vector policy_input(const AgentNets& nets, const Vector2& position, int skill);
Matrix policy_inputs(const AgentNets& nets, const std::vector<Vector2>& positions, const std::vector<int>& skills);

/// Diagonal Gaussian log-density of `u`.
double gaussian_log_prob(const Vector2& u, const Vector2& mean, const Vector& log_std);

maze::ActionSample sample_action(const AgentNets& nets, const Vector2& position, int skill, Rng& rng);
/// bound * tanh(mean); the latent is the mean itself.
maze::ActionSample mean_action(const AgentNets& nets, const Vector2& position, int skill);

maze::Policy stochastic_policy(const AgentNets& nets);
maze::Policy deterministic_policy(const AgentNets& nets);
/// Uniform actions in the action box; used as the random baseline.
maze::Policy random_policy(double action_bound);

}  // namespace skilldisc::agent
