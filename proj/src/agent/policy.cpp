#include "skilldisc/agent/policy.hpp"

#include <cmath>
#include <numbers>

namespace skilldisc::agent {

Vector2 observe(const Vector2& position, const Vector2& extent) {
  return (2.0 * position.array() / extent.array() - 1.0).matrix();
}

AgentNets AgentNets::make(int n_skills, const Vector2& extent, double action_bound, int hidden, int depth,
                          double init_log_std, Rng& rng) {
  if (n_skills < 1) throw Error("agent needs at least one skill");
  if (!(action_bound > 0.0)) throw Error("action_bound must be > 0");
  if (hidden < 1 || depth < 1) throw Error("agent network shape must be positive");
  AgentNets nets;
  nets.n_skills = n_skills;
  nets.extent = extent;
  nets.action_bound = action_bound;
  const std::vector<int> layers(static_cast<std::size_t>(depth), hidden);
  nets.policy = diffnet::Network::init(diffnet::MlpSpec::make(2 + n_skills, layers, 2), rng);
  nets.log_std = Vector::Constant(2, init_log_std);
  nets.value = diffnet::Network::init(diffnet::MlpSpec::make(2 + n_skills, layers, 2), rng);
  return nets;
}

Vector AgentNets::flat() const {
  Vector f(size());
  f << policy.params, log_std, value.params;
  return f;
}

void AgentNets::set_flat(const Vector& f) {
  if (f.size() != size()) throw DimensionError("agent parameter vector has the wrong length");
  policy.params = f.segment(0, policy.size());
  log_std = f.segment(log_std_offset(), log_std.size());
  value.params = f.segment(value_offset(), value.size());
}

Vector policy_input(const AgentNets& nets, const Vector2& position, int skill) {
  if (skill < 0 || skill >= nets.n_skills) throw DimensionError("skill index out of range");
  Vector x = Vector::Zero(nets.input_dim());
  x.head<2>() = observe(position, nets.extent);
  x[2 + skill] = 1.0;
  return x;
}

Matrix policy_inputs(const AgentNets& nets, const std::vector<Vector2>& positions, const std::vector<int>& skills) {
  if (positions.size() != skills.size()) throw DimensionError("positions and skills differ in length");
  Matrix x = Matrix::Zero(nets.input_dim(), static_cast<Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const int z = skills[i];
    if (z < 0 || z >= nets.n_skills) throw DimensionError("skill index out of range");
    x.col(static_cast<Index>(i)).head<2>() = observe(positions[i], nets.extent);
    x(2 + z, static_cast<Index>(i)) = 1.0;
  }
  return x;
}

double gaussian_log_prob(const Vector2& u, const Vector2& mean, const Vector& log_std) {
  double lp = 0.0;
  for (int d = 0; d < 2; ++d) {
    const double z = (u[d] - mean[d]) * std::exp(-log_std[d]);
    lp += -0.5 * z * z - log_std[d] - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  return lp;
}

maze::ActionSample sample_action(const AgentNets& nets, const Vector2& position, int skill, Rng& rng) {
  const Vector2 mean = nets.policy(policy_input(nets, position, skill));
  maze::ActionSample s;
  for (int d = 0; d < 2; ++d) s.latent[d] = mean[d] + std::exp(nets.log_std[d]) * standard_normal(rng);
  s.action = nets.action_bound * s.latent.array().tanh();
  s.log_prob = gaussian_log_prob(s.latent, mean, nets.log_std);
  return s;
}

maze::ActionSample mean_action(const AgentNets& nets, const Vector2& position, int skill) {
  const Vector2 mean = nets.policy(policy_input(nets, position, skill));
  maze::ActionSample s;
  s.latent = mean;
  s.action = nets.action_bound * mean.array().tanh();
  s.log_prob = gaussian_log_prob(mean, mean, nets.log_std);
  return s;
}

maze::Policy stochastic_policy(const AgentNets& nets) {
  return [&nets](const Vector2& s, int z, Rng& rng) { return sample_action(nets, s, z, rng); };
}

maze::Policy deterministic_policy(const AgentNets& nets) {
  return [&nets](const Vector2& s, int z, Rng&) { return mean_action(nets, s, z); };
}

maze::Policy random_policy(double action_bound) {
  return [action_bound](const Vector2&, int, Rng& rng) {
    maze::ActionSample s;
    for (int d = 0; d < 2; ++d) s.action[d] = action_bound * (2.0 * uniform01(rng) - 1.0);
    return s;
  };
}

}  // namespace skilldisc::agent
