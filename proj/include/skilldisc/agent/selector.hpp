#pragma once

#include <cmath>
#include <vector>

#include "skilldisc/diffnet/adam.hpp"
#include "skilldisc/diffnet/mlp.hpp"

namespace skilldisc::agent {

/// eps(t) = end + (start - end) exp(-t / decay).
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.01;
  double decay = 20000.0;

  double operator()(double t) const { return end + (start - end) * std::exp(-t / decay); }
  void validate() const;
};

struct SelectorConfig {
  EpsilonSchedule epsilon;
  double lr = 3e-4;
  int hidden = 256;
  int depth = 2;
  double gamma = 0.99;
  int batch_size = 256;
  int updates_per_interval = 64;
  double target_ema = 0.01;  // Polyak rate of the bootstrap target network
  /// Steps a chosen skill is kept before the selector is consulted again.
  /// TD targets then span the whole interval with discount gamma^interval.
  int decision_interval = 10;
  int buffer_capacity = 100000;
  /// Reserved for an entropy-regularised variant; only 0 is implemented.
  double entropy_coef = 0.0;

  void validate() const;
};

/// State-conditioned Q-values over skills, used epsilon-greedily.
struct SkillSelector {
  int n_skills = 0;
  Vector2 extent = Vector2::Ones();
  diffnet::Network q;
  Vector q_target;  // parameters used for bootstrap targets
  diffnet::AdamState opt;
  SelectorConfig config;

  static SkillSelector make(int n_skills, const Vector2& extent, const SelectorConfig& config, Rng& rng);
  Vector q_values(const Vector2& position) const;
};

/// Index of the largest entry; the smallest index wins ties.
Index argmax_first(const Vector& values);

/// With probability eps(t) a uniform skill, otherwise the greedy one.
/// `greedy` forces the greedy choice and leaves the rng untouched.
int select_skill(const SkillSelector& selector, const Vector2& position, double t, Rng& rng, bool greedy = false);

/// Transitions for TD learning; states are raw maze positions.
struct SelectorBatch {
  std::vector<Vector2> states;
  std::vector<int> skills;
  std::vector<double> rewards;
  std::vector<Vector2> next_states;
  std::vector<bool> done;

  std::size_t size() const { return states.size(); }
};

/// mean (Q(s, z) - y)^2 with y = r + gamma (1 - done) max_z' Q_target(s', z').
/// Targets come from `target_params` and are held constant, so the gradient
/// is taken w.r.t. `params` only.
diffnet::LossAndGradient selector_td_loss(const SkillSelector& selector, const Vector& params,
                                          const SelectorBatch& batch, double gamma, const Vector& target_params);

/// One Adam step with targets from `q_target`, which then moves towards the
/// new parameters by `target_ema`. Returns the pre-update loss.
double selector_update(SkillSelector& selector, const SelectorBatch& batch, double gamma);

}  // namespace skilldisc::agent
