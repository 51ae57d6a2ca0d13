#include "skilldisc/diffnet/adam.hpp"

#include <cmath>

namespace skilldisc::diffnet {

void adam_step(Vector& params, const Vector& grad, AdamState& state, double lr) {
  if (!(lr > 0.0)) throw Error("adam_step: learning rate must be positive");
  if (grad.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size())
    throw DimensionError("adam_step: parameter, gradient and state sizes differ");
  if (!grad.allFinite()) {
    Index bad = 0;
    while (bad < grad.size() && std::isfinite(grad[bad])) ++bad;
    throw NonFiniteError("adam_step: non-finite gradient at coordinate " + std::to_string(bad));
  }
  state.step += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  params.array() -= lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + state.eps);
}

}  // namespace skilldisc::diffnet
