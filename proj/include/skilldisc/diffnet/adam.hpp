#pragma once

#include "skilldisc/common.hpp"

namespace skilldisc::diffnet {

/// First/second moment estimates of the adaptive-moment optimizer.
struct AdamState {
  Vector m;
  Vector v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(Index n) : m(Vector::Zero(n)), v(Vector::Zero(n)) {}
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(Vector& params, const Vector& grad, AdamState& state, double lr);

}  // namespace skilldisc::diffnet
