#include "skilldisc/agent/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "skilldisc/metrics/evaluation.hpp"
#include "skilldisc/rewards/combine.hpp"
#include "skilldisc/rewards/particle_entropy.hpp"

namespace skilldisc::agent {

namespace {

// Stream identifiers for derive_seed.
enum Stream : std::uint64_t {
  kInit = 1,
  kPretrainMain = 2,
  kSurgery = 3,
  kPretrainRollout = 4,
  kEval = 5,
  kBaseline = 6,
  kSelectorInit = 11,
  kFinetuneMain = 12,
  kFinetuneRollout = 13,
  kFinetuneEval = 14,
};

std::string hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

Matrix columns(const Matrix& m, const std::vector<Index>& idx) {
  Matrix out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Index>(i)) = m.col(idx[i]);
  return out;
}

double mean_of(const Vector& v) { return v.size() > 0 ? v.mean() : 0.0; }

}  // namespace

std::vector<maze::Trajectory> collect_episodes(int count, std::uint64_t seed, int workers,
                                               const std::function<maze::Trajectory(int, Rng&)>& run_episode) {
  std::vector<maze::Trajectory> out(static_cast<std::size_t>(std::max(count, 0)));
  auto run = [&](int e) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(e)));
    out[static_cast<std::size_t>(e)] = run_episode(e, rng);
  };
  const int w = std::max(1, std::min(workers, count));
  if (w == 1) {
    for (int e = 0; e < count; ++e) run(e);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i)
    pool.emplace_back([&, i] {
      try {
        for (int e = i; e < count; e += w) run(e);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

SkillEvaluation evaluate_skills(const maze::MazeSpec& spec, const maze::EnvConfig& env, const maze::Policy& policy,
                                int n_skills, int episodes_per_skill, std::uint64_t seed, int workers) {
  const int count = n_skills * episodes_per_skill;
  auto trajs = collect_episodes(count, seed, workers, [&](int e, Rng& rng) {
    return maze::rollout(spec, env, policy, e % n_skills, rng);
  });
  SkillEvaluation ev;
  ev.by_skill.resize(static_cast<std::size_t>(n_skills));
  auto summary = metrics::SkillRunSummary::for_maze(spec, n_skills);
  std::vector<Vector2> positions;
  for (int e = 0; e < count; ++e) {
    const auto& traj = trajs[static_cast<std::size_t>(e)];
    summary.add_trajectory(spec, traj);
    for (const auto& tr : traj) positions.push_back(tr.next_state);
    ev.by_skill[static_cast<std::size_t>(e % n_skills)].push_back(traj);
  }
  ev.coverage = metrics::coverage(summary, spec);
  ev.mutual_information = summary.total() > 0 ? metrics::plugin_mi(summary) : 0.0;
  if (positions.size() >= 2) {
    Matrix pts(2, static_cast<Index>(positions.size()));
    for (std::size_t i = 0; i < positions.size(); ++i) pts.col(static_cast<Index>(i)) = positions[i];
    const int k = std::min<int>(16, static_cast<int>(positions.size()) - 1);
    ev.entropy_estimate = rewards::particle_entropy_rewards(pts, k, 0.0).mean();
  }
  return ev;
}

PretrainState PretrainState::init(const maze::MazeSpec& spec, const RunConfig& config) {
  Rng rng(derive_seed(config.seed, kInit));
  const Vector2 extent(spec.width, spec.height);
  const auto& enc = config.encoders;
  const int h = enc.hidden;
  PretrainState st{
      AgentNets::make(config.n_skills, extent, config.env.action_bound, config.policy_hidden, config.policy_depth,
                      config.init_log_std, rng),
      rewards::CicEncoders::make(2, config.n_skills, enc.embed_dim, h, enc.temperature, rng),
      rewards::RndPair::make(diffnet::MlpSpec::make(2, {h, h}, enc.rnd_dim), rng),
      rewards::DiversityEncoder::make(diffnet::MlpSpec::make(2, {h, h, h}, enc.embed_dim), rng),
  };
  return st;
}

diffnet::Checkpoint to_checkpoint(const PretrainState& st, const RunConfig& config, long step) {
  diffnet::Checkpoint ck;
  ck.seed = config.seed;
  ck.step = step;
  ck.meta["n_skills"] = std::to_string(st.nets.n_skills);
  ck.meta["extent_x"] = hexfloat(st.nets.extent.x());
  ck.meta["extent_y"] = hexfloat(st.nets.extent.y());
  ck.meta["action_bound"] = hexfloat(st.nets.action_bound);
  ck.meta["temperature"] = hexfloat(st.cic.temperature);
  ck.put("policy", st.nets.policy);
  ck.put("log_std", st.nets.log_std);
  ck.put("value", st.nets.value);
  ck.put("cic_pair", st.cic.pair_encoder);
  ck.put("cic_skill", st.cic.skill_encoder);
  ck.put("rnd_predictor", st.rnd.predictor);
  ck.put("rnd_target", st.rnd.target);
  ck.put("diversity_encoder", st.diversity.encoder);
  ck.put("diversity_metric_raw", st.diversity.lambda_raw);
  return ck;
}

AgentNets agent_from_checkpoint(const diffnet::Checkpoint& ck, const RunConfig& config) {
  for (const char* key : {"n_skills", "extent_x", "extent_y", "action_bound"})
    if (!ck.meta.count(key)) throw Error(std::string("checkpoint is missing meta field ") + key);
  const int n_skills = std::stoi(ck.meta.at("n_skills"));
  if (n_skills != config.n_skills)
    throw DimensionError("checkpoint/config mismatch in n_skills: checkpoint " + std::to_string(n_skills) +
                         ", config " + std::to_string(config.n_skills));
  const double bound = std::strtod(ck.meta.at("action_bound").c_str(), nullptr);
  if (bound != config.env.action_bound)
    throw DimensionError("checkpoint/config mismatch in env.action_bound");
  AgentNets nets;
  nets.n_skills = n_skills;
  nets.extent = {std::strtod(ck.meta.at("extent_x").c_str(), nullptr),
                 std::strtod(ck.meta.at("extent_y").c_str(), nullptr)};
  nets.action_bound = bound;
  nets.policy = ck.network("policy");
  nets.log_std = ck.vector("log_std");
  nets.value = ck.network("value");
  if (nets.policy.spec.input_dim != nets.input_dim() || nets.value.spec.input_dim != nets.input_dim())
    throw DimensionError("checkpoint/config mismatch in policy input dimension");
  if (nets.policy.spec.output_dim != 2 || nets.log_std.size() != 2 || nets.value.spec.output_dim != 2)
    throw DimensionError("checkpoint policy/value output shapes are not 2-D");
  const std::vector<int> hidden(static_cast<std::size_t>(config.policy_depth), config.policy_hidden);
  if (nets.policy.spec.hidden_dims != hidden || nets.value.spec.hidden_dims != hidden)
    throw DimensionError("checkpoint/config mismatch in ppo.hidden/ppo.depth");
  return nets;
}

PretrainResult pretrain(const maze::MazeSpec& spec, const RunConfig& config, const MetricsSink& sink) {
  config.validate();
  if (config.n_skills < 2) throw Error("pretraining needs n_skills >= 2");
  if (config.env.goal) throw Error("pretraining runs without a goal");

  PretrainState st = PretrainState::init(spec, config);
  PretrainResult res;
  const auto emit = [&](const MetricsRecord& r) {
    res.metrics.push_back(r);
    if (sink) sink(r);
  };

  Rng rng(derive_seed(config.seed, kPretrainMain));
  Rng surgery_rng(derive_seed(config.seed, kSurgery));
  diffnet::AdamState opt(st.nets.size());
  surgery::SurgeryConfig scfg = config.surgery;
  if (config.surgery_value_only) scfg.slice = surgery::ParameterSlice{st.nets.value_offset(), st.nets.value.size()};
  rewards::RunningMeanStd rms_ent, rms_rnd, rms_div;

  const int n_skills = config.n_skills;
  const int episodes = config.ppo.rollouts_per_update;
  const auto& enc = config.encoders;
  const auto& budget = config.budget;

  const auto evaluate = [&](long it) {
    const auto ev = evaluate_skills(spec, config.env, stochastic_policy(st.nets), n_skills,
                                    budget.eval_episodes_per_skill, derive_seed(config.seed, kEval, it),
                                    config.workers);
    MetricsRecord r{"eval", it, {}, {}};
    r.add("coverage", ev.coverage).add("mutual_information", ev.mutual_information);
    r.add("entropy_estimate", ev.entropy_estimate);
    r.add("conflict_ratio", res.conflicts.steps_total > 0 ? surgery::conflict_ratio(res.conflicts) : 0.0);
    emit(r);
    res.snapshots.push_back({it, ev.by_skill});
    res.final_eval = ev;
  };

  for (int it = 1; it <= budget.pretrain_iterations; ++it) {
    std::vector<int> ep_skill(static_cast<std::size_t>(episodes));
    for (auto& z : ep_skill) z = std::uniform_int_distribution<int>(0, n_skills - 1)(rng);
    const auto trajs = collect_episodes(episodes, derive_seed(config.seed, kPretrainRollout, it), config.workers,
                                        [&](int e, Rng& r) {
                                          return maze::rollout(spec, config.env, stochastic_policy(st.nets),
                                                               ep_skill[static_cast<std::size_t>(e)], r);
                                        });

    Index n = 0;
    for (const auto& t : trajs) n += static_cast<Index>(t.size());
    Matrix obs(2, n), next(2, n), onehot = Matrix::Zero(n_skills, n);
    std::vector<int> skills(static_cast<std::size_t>(n));
    std::vector<std::vector<Index>> by_skill(static_cast<std::size_t>(n_skills));
    {
      Index c = 0;
      for (const auto& traj : trajs)
        for (const auto& tr : traj) {
          obs.col(c) = observe(tr.state, st.nets.extent);
          next.col(c) = observe(tr.next_state, st.nets.extent);
          onehot(tr.skill, c) = 1.0;
          skills[static_cast<std::size_t>(c)] = tr.skill;
          by_skill[static_cast<std::size_t>(tr.skill)].push_back(c);
          ++c;
        }
    }
    Matrix pairs(4, n);
    pairs << obs, next;
    // Positive for each transition: another transition of the same skill.
    std::vector<Index> positive(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      const auto& pool = by_skill[static_cast<std::size_t>(skills[static_cast<std::size_t>(i)])];
      Index j = i;
      if (pool.size() > 1) {
        do {
          j = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        } while (j == i);
      }
      positive[static_cast<std::size_t>(i)] = j;
    }
    const Matrix positives = columns(next, positive);

    // Encoder updates on minibatches.
    const Index mb = std::min<Index>(enc.batch_size, n);
    double cic_loss = 0.0, rnd_loss = 0.0, div_loss = 0.0;
    for (int u = 0; u < enc.updates_per_iteration; ++u) {
      std::vector<Index> idx(static_cast<std::size_t>(mb));
      for (auto& i : idx) i = std::uniform_int_distribution<Index>(0, n - 1)(rng);
      cic_loss = rewards::cic_update(st.cic, columns(pairs, idx), columns(onehot, idx), enc.lr);
      rnd_loss = rewards::rnd_update(st.rnd, columns(next, idx), enc.lr);
      rewards::ContrastiveBatch cb{columns(next, idx), columns(positives, idx), {}};
      for (Index i : idx) cb.skills.push_back(skills[static_cast<std::size_t>(i)]);
      div_loss = rewards::aninfonce_update(st.diversity, cb, enc.lr);
    }

    // Intrinsic rewards on the whole batch.
    const int k = std::min<int>(config.rewards.k_neighbors, static_cast<int>(n) - 1);
    const Vector raw_ent =
        rewards::particle_entropy_rewards(rewards::cic_embed_pairs(st.cic, pairs), k, config.rewards.knn_clip);
    const Vector raw_rnd = rewards::rnd_rewards(st.rnd, next);
    const Vector raw_div = rewards::aninfonce_batch(st.diversity, {next, positives, skills}, false).rewards;
    Vector r_ent = raw_ent, r_rnd = raw_rnd, r_div = raw_div;
    if (enc.normalize_rewards) {
      rms_ent.update(raw_ent);
      rms_rnd.update(raw_rnd);
      rms_div.update(raw_div);
      r_ent = rms_ent.standardize(raw_ent);
      r_rnd = rms_rnd.standardize(raw_rnd);
      r_div = rms_div.standardize(raw_div);
    }
    const auto combined = rewards::combine_rewards(config.rewards, r_ent, r_rnd, r_div);

    const PpoBatch batch = make_ppo_batch(st.nets, trajs);
    const Matrix values = st.nets.value(batch.inputs);
    const StreamTargets t_expl =
        stream_targets(batch, combined.exploration, values.row(0).transpose(), 0, config.ppo);
    StreamTargets t_div;
    if (config.diversity_stream)
      t_div = stream_targets(batch, combined.diversity, values.row(1).transpose(), 1, config.ppo);
    const PpoUpdateStats stats = ppo_update_with_surgery(st.nets, opt, batch, t_expl,
                                                         config.diversity_stream ? &t_div : nullptr, config.ppo,
                                                         scfg, surgery_rng);
    res.conflicts += stats.conflicts;

    MetricsRecord tr{"train", it, {}, {}};
    tr.add("r_entropy", mean_of(raw_ent)).add("r_rnd", mean_of(raw_rnd)).add("r_diversity", mean_of(raw_div));
    tr.add("r_exploration", mean_of(combined.exploration)).add("r_total", mean_of(combined.total));
    tr.add("loss_cic", cic_loss).add("loss_rnd", rnd_loss).add("loss_diversity_encoder", div_loss);
    tr.add("loss_exploration", stats.last_exploration.loss);
    if (config.diversity_stream) tr.add("loss_diversity", stats.last_diversity.loss);
    tr.add("policy_log_std", st.nets.log_std.mean());
    if (stats.conflicts.steps_total > 0) {
      tr.add("conflict_ratio_update", surgery::conflict_ratio(stats.conflicts));
      tr.add("conflict_ratio", surgery::conflict_ratio(res.conflicts));
    }
    emit(tr);
    if (!stats.dots.empty()) emit(MetricsRecord{"surgery", it, {}, {{"dot", stats.dots}}});
    for (int z = 0; z < n_skills; ++z) {
      const auto& ids = by_skill[static_cast<std::size_t>(z)];
      if (ids.empty()) continue;
      double e = 0, r = 0, d = 0, t = 0;
      for (Index i : ids) {
        e += raw_ent[i];
        r += raw_rnd[i];
        d += raw_div[i];
        t += combined.total[i];
      }
      const double m = static_cast<double>(ids.size());
      MetricsRecord rt{"reward_trace", it, {}, {}};
      rt.add("skill", z).add("r_entropy", e / m).add("r_rnd", r / m).add("r_diversity", d / m).add("r_total", t / m);
      emit(rt);
    }

    if (it % budget.eval_interval == 0 || it == budget.pretrain_iterations) evaluate(it);
  }
  if (budget.pretrain_iterations == 0) evaluate(0);

  res.random_baseline = evaluate_skills(spec, config.env, random_policy(config.env.action_bound), n_skills,
                                        budget.eval_episodes_per_skill, derive_seed(config.seed, kBaseline),
                                        config.workers);
  MetricsRecord base{"baseline", budget.pretrain_iterations, {}, {}};
  base.add("coverage", res.random_baseline.coverage).add("mutual_information", res.random_baseline.mutual_information);
  base.add("entropy_estimate", res.random_baseline.entropy_estimate);
  emit(base);

  res.checkpoint = to_checkpoint(st, config, budget.pretrain_iterations);
  return res;
}

maze::EnvConfig goal_env(const maze::MazeSpec& spec, const RunConfig& config) {
  maze::EnvConfig env = config.env;
  std::optional<maze::Tile> tile = config.goal_tile ? config.goal_tile : spec.goal;
  if (!tile) throw Error("fine-tuning needs a goal: the layout has no G tile and env.goal is unset");
  if (!spec.is_free(*tile)) throw Error("env.goal must be a free tile");
  env.goal = maze::GoalConfig{*tile, config.goal_radius};
  return env;
}

namespace {

// Consults the selector every `decision_interval` steps and keeps the skill in between.
maze::SkillChooser interval_chooser(const SkillSelector& selector, double t0, bool greedy) {
  const int k = selector.config.decision_interval;
  return [&selector, t0, greedy, k, current = 0](const Vector2& s, int step, Rng& r) mutable {
    if (step % k == 0) current = select_skill(selector, s, t0 + step, r, greedy);
    return current;
  };
}

}  // namespace

double goal_success_rate(const AgentNets& nets, const SkillSelector* selector, const maze::MazeSpec& spec,
                         const maze::EnvConfig& env, int episodes, std::uint64_t seed, int workers,
                         std::vector<maze::Trajectory>* trajectories) {
  if (episodes < 1) throw Error("success rate needs at least one episode");
  const auto policy = stochastic_policy(nets);
  auto trajs = collect_episodes(episodes, seed, workers, [&](int, Rng& rng) {
    if (selector) {
      return maze::rollout(spec, env, policy, interval_chooser(*selector, 0.0, true), rng);
    }
    const int z = std::uniform_int_distribution<int>(0, nets.n_skills - 1)(rng);
    return maze::rollout(spec, env, policy, z, rng);
  });
  int hits = 0;
  for (const auto& t : trajs)
    if (maze::reached_goal(t)) ++hits;
  if (trajectories) *trajectories = std::move(trajs);
  return static_cast<double>(hits) / static_cast<double>(episodes);
}

FinetuneResult finetune(const diffnet::Checkpoint& pretrained, const maze::MazeSpec& spec, const RunConfig& config,
                        SkillChoice choice, const MetricsSink& sink) {
  config.validate();
  AgentNets nets = agent_from_checkpoint(pretrained, config);
  const maze::EnvConfig env = goal_env(spec, config);
  FinetuneResult res;
  const auto emit = [&](const MetricsRecord& r) {
    res.metrics.push_back(r);
    if (sink) sink(r);
  };

  Rng init_rng(derive_seed(config.seed, kSelectorInit));
  SkillSelector selector = SkillSelector::make(config.n_skills, nets.extent, config.selector, init_rng);
  const bool use_selector = choice == SkillChoice::selector;
  Rng rng(derive_seed(config.seed, kFinetuneMain));
  diffnet::AdamState opt(nets.size());
  const int L = env.episode_length;
  const long budget_steps = config.budget.finetune_steps;

  struct Replay {
    std::vector<Vector2> s, s2;
    std::vector<int> z;
    std::vector<double> r;
    std::vector<bool> done;
    std::size_t head = 0;
  } replay;
  const std::size_t capacity = static_cast<std::size_t>(config.selector.buffer_capacity);
  const auto store = [&](const Vector2& s, int z, double r, const Vector2& s2, bool done) {
    if (replay.s.size() < capacity) {
      replay.s.push_back(s);
      replay.s2.push_back(s2);
      replay.z.push_back(z);
      replay.r.push_back(r);
      replay.done.push_back(done);
    } else {
      const std::size_t h = replay.head;
      replay.s[h] = s;
      replay.s2[h] = s2;
      replay.z[h] = z;
      replay.r[h] = r;
      replay.done[h] = done;
      replay.head = (h + 1) % capacity;
    }
  };
  // One selector transition per decision: discounted reward over the interval.
  const int k = config.selector.decision_interval;
  const double gamma = config.selector.gamma;
  const double gamma_k = std::pow(gamma, k);
  const auto store_segments = [&](const maze::Trajectory& traj) {
    for (std::size_t begin = 0; begin < traj.size(); begin += static_cast<std::size_t>(k)) {
      const std::size_t end = std::min(traj.size(), begin + static_cast<std::size_t>(k));
      double ret = 0.0, disc = 1.0;
      for (std::size_t i = begin; i < end; ++i) {
        ret += disc * traj[i].extrinsic_reward;
        disc *= gamma;
      }
      // A segment shorter than k ends the episode, so gamma^k never bootstraps past it.
      store(traj[begin].state, traj[begin].skill, ret, traj[end - 1].next_state, traj[end - 1].done);
    }
  };

  long t = 0;
  for (long update = 0; t < budget_steps; ++update) {
    const long remaining_eps = (budget_steps - t + L - 1) / L;
    const int count = static_cast<int>(std::min<long>(config.ppo.rollouts_per_update, remaining_eps));
    const long base_t = t;
    std::vector<int> ep_skill(static_cast<std::size_t>(count), 0);
    if (!use_selector)
      for (auto& z : ep_skill) z = std::uniform_int_distribution<int>(0, config.n_skills - 1)(rng);
    const auto policy = stochastic_policy(nets);
    const auto trajs = collect_episodes(
        count, derive_seed(config.seed, kFinetuneRollout, static_cast<std::uint64_t>(update)), config.workers,
        [&](int e, Rng& r) {
          if (use_selector) {
            const double t0 = static_cast<double>(base_t + static_cast<long>(e) * L);
            return maze::rollout(spec, env, policy, interval_chooser(selector, t0, false), r);
          }
          return maze::rollout(spec, env, policy, ep_skill[static_cast<std::size_t>(e)], r);
        });
    t += static_cast<long>(count) * L;

    std::vector<double> rewards_v;
    std::vector<double> histogram(static_cast<std::size_t>(config.n_skills), 0.0);
    int reached = 0;
    double total_return = 0.0;
    for (const auto& traj : trajs) {
      if (maze::reached_goal(traj)) ++reached;
      if (use_selector) store_segments(traj);
      for (const auto& tr : traj) {
        rewards_v.push_back(tr.extrinsic_reward);
        total_return += tr.extrinsic_reward;
        histogram[static_cast<std::size_t>(tr.skill)] += 1.0;
      }
    }
    const PpoBatch batch = make_ppo_batch(nets, trajs);
    const Vector rewards_vec = Eigen::Map<const Vector>(rewards_v.data(), static_cast<Index>(rewards_v.size()));
    const StreamTargets targets = stream_targets(nets, batch, rewards_vec, 0, config.ppo);
    const auto stats = ppo_update_with_surgery(nets, opt, batch, targets, nullptr, config.ppo, config.surgery, rng);

    double sel_loss = 0.0;
    if (use_selector && !replay.s.empty()) {
      for (int u = 0; u < config.selector.updates_per_interval; ++u) {
        SelectorBatch sb;
        const std::size_t bs = std::min<std::size_t>(static_cast<std::size_t>(config.selector.batch_size), replay.s.size());
        for (std::size_t i = 0; i < bs; ++i) {
          const std::size_t j = std::uniform_int_distribution<std::size_t>(0, replay.s.size() - 1)(rng);
          sb.states.push_back(replay.s[j]);
          sb.skills.push_back(replay.z[j]);
          sb.rewards.push_back(replay.r[j]);
          sb.next_states.push_back(replay.s2[j]);
          sb.done.push_back(replay.done[j]);
        }
        sel_loss = selector_update(selector, sb, gamma_k);
      }
    }

    MetricsRecord r{"finetune", t, {}, {}};
    r.add("train_success", static_cast<double>(reached) / count).add("mean_return", total_return / count);
    r.add("loss_policy", stats.last_exploration.loss);
    if (use_selector) r.add("epsilon", config.selector.epsilon(static_cast<double>(t))).add("loss_selector", sel_loss);
    r.add("skill_histogram", histogram);
    emit(r);
  }

  res.success_rate = goal_success_rate(nets, use_selector ? &selector : nullptr, spec, env,
                                       config.budget.finetune_eval_episodes, derive_seed(config.seed, kFinetuneEval),
                                       config.workers, &res.eval_trajectories);
  MetricsRecord fin{"finetune_eval", t, {}, {}};
  fin.add("success_rate", res.success_rate).add("episodes", config.budget.finetune_eval_episodes);
  emit(fin);

  if (budget_steps == 0) {
    res.checkpoint = pretrained;
    return res;
  }
  res.checkpoint = pretrained;
  res.checkpoint.step = pretrained.step + t;
  res.checkpoint.meta["finetune_steps"] = std::to_string(t);
  res.checkpoint.put("policy", nets.policy);
  res.checkpoint.put("log_std", nets.log_std);
  res.checkpoint.put("value", nets.value);
  if (use_selector) res.checkpoint.put("selector_q", selector.q);
  return res;
}

}  // namespace skilldisc::agent
