#include "skilldisc/agent/selector.hpp"

#include <cmath>

#include "skilldisc/agent/policy.hpp"

namespace skilldisc::agent {

void EpsilonSchedule::validate() const {
  if (!(start >= 0.0 && start <= 1.0) || !(end >= 0.0 && end <= 1.0))
    throw Error("selector epsilon start/end must lie in [0, 1]");
  if (end > start) throw Error("selector epsilon end must not exceed start");
  if (!(decay > 0.0)) throw Error("selector epsilon decay must be > 0");
}

void SelectorConfig::validate() const {
  epsilon.validate();
  if (!(lr > 0.0)) throw Error("selector.lr must be > 0");
  if (hidden < 1 || depth < 1) throw Error("selector network shape must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("selector.gamma must lie in (0, 1]");
  if (batch_size < 1) throw Error("selector.batch_size must be >= 1");
  if (updates_per_interval < 0) throw Error("selector.updates_per_interval must be >= 0");
  if (!(target_ema > 0.0 && target_ema <= 1.0)) throw Error("selector.target_ema must lie in (0, 1]");
  if (decision_interval < 1) throw Error("selector.decision_interval must be >= 1");
  if (buffer_capacity < 1) throw Error("selector.buffer_capacity must be >= 1");
  if (entropy_coef != 0.0) throw Error("selector.entropy_coef: only 0 (plain Q-learning) is supported");
}

SkillSelector SkillSelector::make(int n_skills, const Vector2& extent, const SelectorConfig& config, Rng& rng) {
  if (n_skills < 1) throw Error("selector needs at least one skill");
  config.validate();
  SkillSelector s;
  s.n_skills = n_skills;
  s.extent = extent;
  s.config = config;
  const std::vector<int> layers(static_cast<std::size_t>(config.depth), config.hidden);
  s.q = diffnet::Network::init(diffnet::MlpSpec::make(2, layers, n_skills), rng);
  s.q_target = s.q.params;
  s.opt = diffnet::AdamState(s.q.size());
  return s;
}

Vector SkillSelector::q_values(const Vector2& position) const {
  return q(Vector(observe(position, extent)));
}

Index argmax_first(const Vector& values) {
  if (values.size() == 0) throw Error("argmax of an empty vector");
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

int select_skill(const SkillSelector& selector, const Vector2& position, double t, Rng& rng, bool greedy) {
  if (!greedy && uniform01(rng) < selector.config.epsilon(t))
    return std::uniform_int_distribution<int>(0, selector.n_skills - 1)(rng);
  return static_cast<int>(argmax_first(selector.q_values(position)));
}

namespace {

Matrix observe_all(const std::vector<Vector2>& positions, const Vector2& extent) {
  Matrix x(2, static_cast<Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) x.col(static_cast<Index>(i)) = observe(positions[i], extent);
  return x;
}

}  // namespace

diffnet::LossAndGradient selector_td_loss(const SkillSelector& sel, const Vector& params, const SelectorBatch& batch,
                                          double gamma, const Vector& target_params) {
  const std::size_t n = batch.size();
  if (n == 0) throw Error("selector batch is empty");
  if (batch.skills.size() != n || batch.rewards.size() != n || batch.next_states.size() != n ||
      batch.done.size() != n)
    throw DimensionError("selector batch fields differ in length");
  const Matrix next_q = diffnet::mlp_forward(sel.q.spec, target_params, observe_all(batch.next_states, sel.extent));
  Vector targets(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Index c = static_cast<Index>(i);
    const double bootstrap = batch.done[i] ? 0.0 : next_q.col(c).maxCoeff();
    targets[c] = batch.rewards[i] + gamma * bootstrap;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return diffnet::mlp_gradient(sel.q.spec, params, observe_all(batch.states, sel.extent), [&](const Matrix& q) {
    diffnet::LossValue lv;
    lv.output_grad = Matrix::Zero(q.rows(), q.cols());
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Index c = static_cast<Index>(i);
      const int z = batch.skills[i];
      if (z < 0 || z >= sel.n_skills) throw DimensionError("selector batch skill out of range");
      const double err = q(z, c) - targets[c];
      loss += err * err;
      lv.output_grad(z, c) = 2.0 * err * inv_n;
    }
    lv.value = loss * inv_n;
    return lv;
  });
}

double selector_update(SkillSelector& sel, const SelectorBatch& batch, double gamma) {
  if (sel.q_target.size() != sel.q.size()) sel.q_target = sel.q.params;
  const auto lg = selector_td_loss(sel, sel.q.params, batch, gamma, sel.q_target);
  diffnet::adam_step(sel.q.params, lg.grad, sel.opt, sel.config.lr);
  sel.q_target += sel.config.target_ema * (sel.q.params - sel.q_target);
  return lg.loss;
}

}  // namespace skilldisc::agent
