#pragma once

#include <functional>
#include <vector>

#include "skilldisc/agent/config.hpp"
#include "skilldisc/diffnet/checkpoint.hpp"
#include "skilldisc/record.hpp"
#include "skilldisc/rewards/aninfonce.hpp"
#include "skilldisc/rewards/cic.hpp"
#include "skilldisc/rewards/rnd.hpp"

namespace skilldisc::agent {

using MetricsSink = std::function<void(const MetricsRecord&)>;

/// Runs `count` episodes, episode i with its own rng seeded from (seed, i).
/// Results do not depend on `workers`.
std::vector<maze::Trajectory> collect_episodes(int count, std::uint64_t seed, int workers,
                                               const std::function<maze::Trajectory(int, Rng&)>& run_episode);

struct SkillEvaluation {
  std::vector<std::vector<maze::Trajectory>> by_skill;
  double coverage = 0.0;
  double mutual_information = 0.0;  // nats
  double entropy_estimate = 0.0;    // mean kNN log-distance over visited positions
};

/// Rolls out every skill `episodes_per_skill` times with `policy`.
SkillEvaluation evaluate_skills(const maze::MazeSpec& spec, const maze::EnvConfig& env, const maze::Policy& policy,
                                int n_skills, int episodes_per_skill, std::uint64_t seed, int workers);

/// Networks trained during pretraining.
struct PretrainState {
  AgentNets nets;
  rewards::CicEncoders cic;
  rewards::RndPair rnd;
  rewards::DiversityEncoder diversity;

  static PretrainState init(const maze::MazeSpec& spec, const RunConfig& config);
};

diffnet::Checkpoint to_checkpoint(const PretrainState& state, const RunConfig& config, long step);
/// Throws DimensionError naming the first field where checkpoint and config disagree.
AgentNets agent_from_checkpoint(const diffnet::Checkpoint& checkpoint, const RunConfig& config);

struct Snapshot {
  long iteration = 0;
  std::vector<std::vector<maze::Trajectory>> by_skill;
};

struct PretrainResult {
  diffnet::Checkpoint checkpoint;
  std::vector<MetricsRecord> metrics;
  std::vector<Snapshot> snapshots;
  SkillEvaluation final_eval;
  SkillEvaluation random_baseline;
  surgery::ConflictStats conflicts;
};

/// Unsupervised pretraining with the exploration and diversity streams
/// combined by gradient surgery. Metrics are also passed to `sink` as they
/// are produced.
PretrainResult pretrain(const maze::MazeSpec& spec, const RunConfig& config, const MetricsSink& sink = {});

enum class SkillChoice { selector, uniform_per_episode };

struct FinetuneResult {
  diffnet::Checkpoint checkpoint;
  std::vector<MetricsRecord> metrics;
  double success_rate = 0.0;
  std::vector<maze::Trajectory> eval_trajectories;
};

/// Goal-mode environment for the run configuration.
maze::EnvConfig goal_env(const maze::MazeSpec& spec, const RunConfig& config);

/// Fine-tunes the policy on the extrinsic goal reward. With
/// SkillChoice::selector a Q-learning skill selector picks a skill every
/// `selector.decision_interval` steps and is trained alongside on interval
/// returns; otherwise a uniform skill is drawn per episode. Zero steps return the input checkpoint unchanged.
FinetuneResult finetune(const diffnet::Checkpoint& pretrained, const maze::MazeSpec& spec, const RunConfig& config,
                        SkillChoice choice = SkillChoice::selector, const MetricsSink& sink = {});

/// Fraction of episodes that reach the goal with sampled actions. The
/// selector, when given, acts greedily at its decision interval; otherwise
/// each episode uses one uniform skill.
double goal_success_rate(const AgentNets& nets, const SkillSelector* selector, const maze::MazeSpec& spec,
                         const maze::EnvConfig& env, int episodes, std::uint64_t seed, int workers,
                         std::vector<maze::Trajectory>* trajectories = nullptr);

}  // namespace skilldisc::agent
