#include "skilldisc/rewards/rnd.hpp"

namespace skilldisc::rewards {

RndPair RndPair::make(const diffnet::MlpSpec& spec, Rng& rng) {
  RndPair p;
  p.target = diffnet::Network::init(spec, rng);
  p.predictor = diffnet::Network::init(spec, rng);
  p.opt = diffnet::AdamState(p.predictor.size());
  return p;
}

Vector rnd_rewards(const RndPair& pair, const Matrix& states) {
  if (pair.predictor.spec != pair.target.spec) throw DimensionError("RND predictor and target specs differ");
  return (pair.predictor(states) - pair.target(states)).colwise().squaredNorm().transpose();
}

double rnd_reward(const RndPair& pair, const Vector& state) {
  Matrix s = state;
  return rnd_rewards(pair, s)[0];
}

diffnet::LossAndGradient rnd_loss(const RndPair& pair, const Matrix& states) {
  const Matrix target = pair.target(states);
  const double inv_n = 1.0 / static_cast<double>(states.cols());
  return diffnet::mlp_gradient(pair.predictor.spec, pair.predictor.params, states,
                               [&](const Matrix& out) -> diffnet::LossValue {
                                 Matrix diff = out - target;
                                 return {diff.squaredNorm() * inv_n, 2.0 * inv_n * diff};
                               });
}

double rnd_update(RndPair& pair, const Matrix& states, double lr) {
  auto lg = rnd_loss(pair, states);
  diffnet::adam_step(pair.predictor.params, lg.grad, pair.opt, lr);
  return lg.loss;
}

}  // namespace skilldisc::rewards
