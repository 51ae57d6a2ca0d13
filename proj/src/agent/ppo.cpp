#include "skilldisc/agent/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skilldisc::agent {

void PpoConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("ppo.gamma must lie in (0, 1]");
  if (!(gae_lambda > 0.0 && gae_lambda <= 1.0)) throw Error("ppo.gae_lambda must lie in (0, 1]");
  if (!(clip_ratio > 0.0)) throw Error("ppo.clip_ratio must be > 0");
  if (!(lr > 0.0)) throw Error("ppo.lr must be > 0");
  if (entropy_coef < 0.0) throw Error("ppo.entropy_coef must be >= 0");
  if (value_coef < 0.0) throw Error("ppo.value_coef must be >= 0");
  if (epochs_per_update < 1) throw Error("ppo.epochs must be >= 1");
  if (rollouts_per_update < 1) throw Error("ppo.rollouts_per_update must be >= 1");
}

Vector gae_advantages(const Vector& rewards, const Vector& values, double gamma, double lambda) {
  if (rewards.size() != values.size()) throw DimensionError("gae: rewards and values differ in length");
  const Index n = rewards.size();
  Vector adv(n);
  double next_value = 0.0;
  double next_adv = 0.0;
  for (Index t = n - 1; t >= 0; --t) {
    const double delta = rewards[t] + gamma * next_value - values[t];
    next_adv = delta + gamma * lambda * next_adv;
    adv[t] = next_adv;
    next_value = values[t];
  }
  return adv;
}

PpoBatch make_ppo_batch(const AgentNets& nets, const std::vector<maze::Trajectory>& trajectories) {
  Index n = 0;
  for (const auto& t : trajectories) n += static_cast<Index>(t.size());
  if (n == 0) throw Error("ppo batch is empty");
  PpoBatch b;
  b.inputs = Matrix::Zero(nets.input_dim(), n);
  b.latents.resize(2, n);
  b.old_log_prob.resize(n);
  Index col = 0;
  for (const auto& traj : trajectories) {
    if (traj.empty()) continue;
    b.episodes.emplace_back(col, static_cast<Index>(traj.size()));
    for (const auto& tr : traj) {
      b.inputs.col(col) = policy_input(nets, tr.state, tr.skill);
      b.latents.col(col) = tr.latent;
      b.old_log_prob[col] = tr.log_prob;
      ++col;
    }
  }
  return b;
}

StreamTargets stream_targets(const PpoBatch& batch, const Vector& rewards, const Vector& values, int head,
                             const PpoConfig& config) {
  if (rewards.size() != batch.size() || values.size() != batch.size())
    throw DimensionError("stream rewards/values are not aligned with the batch");
  StreamTargets t;
  t.head = head;
  t.advantages.resize(batch.size());
  for (const auto& [begin, len] : batch.episodes)
    t.advantages.segment(begin, len) =
        gae_advantages(rewards.segment(begin, len), values.segment(begin, len), config.gamma, config.gae_lambda);
  t.returns = t.advantages + values;
  if (config.normalize_advantages && batch.size() > 1) {
    const double mean = t.advantages.mean();
    const double sd = std::sqrt((t.advantages.array() - mean).square().mean());
    t.advantages = (t.advantages.array() - mean) / (sd + 1e-8);
  }
  return t;
}

StreamTargets stream_targets(const AgentNets& nets, const PpoBatch& batch, const Vector& rewards, int head,
                             const PpoConfig& config) {
  const Matrix v = nets.value(batch.inputs);
  return stream_targets(batch, rewards, v.row(head).transpose(), head, config);
}

std::vector<StreamLoss> ppo_stream_losses(const AgentNets& nets, const PpoBatch& batch,
                                          const std::vector<const StreamTargets*>& streams, const PpoConfig& cfg) {
  const Index n = batch.size();
  if (n == 0) throw Error("ppo batch is empty");
  const double inv_n = 1.0 / static_cast<double>(n);
  const diffnet::MlpTape ptape = nets.policy.tape(batch.inputs);
  const diffnet::MlpTape vtape = nets.value.tape(batch.inputs);
  const Matrix& mean = ptape.output();
  const Matrix& values = vtape.output();

  const Vector2 inv_var = (-2.0 * nets.log_std.array()).exp();
  const Matrix diff = batch.latents - mean;  // 2 x N
  Vector log_prob(n);
  const double log_norm = nets.log_std.sum() + std::log(2.0 * std::numbers::pi);
  for (Index i = 0; i < n; ++i)
    log_prob[i] = -0.5 * (diff.col(i).array().square() * inv_var.array()).sum() - log_norm;
  const Vector ratio = (log_prob - batch.old_log_prob).array().exp();
  const double entropy = (nets.log_std.array() + 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e)).sum();

  std::vector<StreamLoss> out;
  for (const StreamTargets* st : streams) {
    if (st->advantages.size() != n || st->returns.size() != n)
      throw DimensionError("stream targets are not aligned with the batch");
    StreamLoss L;
    // dLoss/dlog_prob per sample.
    Vector dlogp = Vector::Zero(n);
    double surr = 0.0;
    Index clipped = 0;
    for (Index i = 0; i < n; ++i) {
      const double a = st->advantages[i];
      const double r = ratio[i];
      const double rc = std::clamp(r, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
      if (r * a <= rc * a) {
        surr += r * a;
        dlogp[i] = -inv_n * r * a;
      } else {
        surr += rc * a;
        ++clipped;
      }
    }
    L.surrogate = surr * inv_n;
    const Vector verr = values.row(st->head).transpose() - st->returns;
    L.value_loss = verr.squaredNorm() * inv_n;
    L.entropy = entropy;
    L.clip_fraction = static_cast<double>(clipped) * inv_n;
    L.loss = -L.surrogate + cfg.value_coef * L.value_loss - cfg.entropy_coef * entropy;
    if (!std::isfinite(L.loss)) {
      Index bad = -1;
      for (Index i = 0; i < n && bad < 0; ++i)
        if (!std::isfinite(ratio[i]) || !std::isfinite(verr[i]) || !std::isfinite(st->advantages[i])) bad = i;
      throw NonFiniteError("ppo loss is not finite", bad);
    }

    // Policy mean: dlogp/dmean = (u - mean) / sigma^2.
    const Matrix dmean = (diff.array().colwise() * inv_var.array()).rowwise() * dlogp.transpose().array();
    const Vector gpol = nets.policy.backward(ptape, dmean);
    // log_std: dlogp/dlog_std = ((u - mean) / sigma)^2 - 1; dH/dlog_std = 1.
    Vector2 gstd;
    for (int d = 0; d < 2; ++d)
      gstd[d] = ((diff.row(d).array().square() * inv_var[d] - 1.0) * dlogp.transpose().array()).sum() -
                cfg.entropy_coef;
    Matrix dval = Matrix::Zero(values.rows(), n);
    dval.row(st->head) = (2.0 * cfg.value_coef * inv_n) * verr.transpose();
    const Vector gval = nets.value.backward(vtape, dval);

    L.grad.resize(nets.size());
    L.grad << gpol, gstd, gval;
    out.push_back(std::move(L));
  }
  return out;
}

PpoUpdateStats ppo_update_with_surgery(AgentNets& nets, diffnet::AdamState& opt, const PpoBatch& batch,
                                       const StreamTargets& exploration, const StreamTargets* diversity,
                                       const PpoConfig& config, const surgery::SurgeryConfig& surgery_config,
                                       Rng& rng) {
  config.validate();
  surgery_config.validate();
  if (opt.m.size() != nets.size()) throw DimensionError("optimizer state does not match the agent");
  PpoUpdateStats stats;
  Vector params = nets.flat();
  for (int epoch = 0; epoch < config.epochs_per_update; ++epoch) {
    if (diversity == nullptr) {
      auto losses = ppo_stream_losses(nets, batch, {&exploration}, config);
      diffnet::adam_step(params, losses[0].grad, opt, config.lr);
      stats.last_exploration = std::move(losses[0]);
    } else {
      auto losses = ppo_stream_losses(nets, batch, {&exploration, diversity}, config);
      const auto combined = surgery::surgery(losses[1].grad, losses[0].grad, surgery_config, stats.conflicts, rng);
      stats.dots.push_back(combined.dot);
      diffnet::adam_step(params, combined.g_final, opt, config.lr);
      stats.last_exploration = std::move(losses[0]);
      stats.last_diversity = std::move(losses[1]);
    }
    nets.set_flat(params);
  }
  return stats;
}

PpoUpdateStats ppo_update_reference(AgentNets& nets, diffnet::AdamState& opt, const PpoBatch& batch,
                                    const StreamTargets& targets, const PpoConfig& config) {
  config.validate();
  PpoUpdateStats stats;
  for (int epoch = 0; epoch < config.epochs_per_update; ++epoch) {
    Vector params = nets.flat();
    StreamLoss loss = ppo_stream_losses(nets, batch, {&targets}, config).front();
    diffnet::adam_step(params, loss.grad, opt, config.lr);
    nets.set_flat(params);
    stats.last_exploration = std::move(loss);
  }
  return stats;
}

}  // namespace skilldisc::agent
