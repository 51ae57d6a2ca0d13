#pragma once

#include <functional>

#include "skilldisc/diffnet/mlp.hpp"

namespace skilldisc::diffnet {

using ScalarFunction = std::function<double(const Vector&)>;

/// Central differences of `f` at `x`, one coordinate at a time.
Vector finite_diff_gradient(const ScalarFunction& f, const Vector& x, double step);

/// max_i |a_i - n_i| / (|n_i| + 1e-8)
double max_relative_error(const Vector& analytic, const Vector& numeric);

/// Compares `mlp_gradient` against central differences for an MLP loss.
double finite_diff_check(const MlpSpec& spec, const Vector& params, const Matrix& inputs,
                         const LossClosure& loss, double step);

/// Same check for any flat-parameter loss that reports its own gradient.
double finite_diff_check(const ScalarFunction& f, const Vector& x, const Vector& analytic, double step);

}  // namespace skilldisc::diffnet
