#pragma once

#include "skilldisc/diffnet/adam.hpp"
#include "skilldisc/diffnet/mlp.hpp"

namespace skilldisc::rewards {

/// Predictor trained to match a frozen, randomly initialised target network.
struct RndPair {
  diffnet::Network predictor;
  diffnet::Network target;  // never updated after construction
  diffnet::AdamState opt;

  static RndPair make(const diffnet::MlpSpec& spec, Rng& rng);
};

/// ||f_pred(s) - f_target(s)||^2 for every column of `states`.
Vector rnd_rewards(const RndPair& pair, const Matrix& states);
double rnd_reward(const RndPair& pair, const Vector& state);

/// Mean squared prediction error over the batch, with its predictor gradient.
diffnet::LossAndGradient rnd_loss(const RndPair& pair, const Matrix& states);

/// One Adam step on the predictor; returns the pre-update loss.
double rnd_update(RndPair& pair, const Matrix& states, double lr);

}  // namespace skilldisc::rewards
