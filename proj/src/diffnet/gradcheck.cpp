#include "skilldisc/diffnet/gradcheck.hpp"

#include <cmath>

namespace skilldisc::diffnet {

Vector finite_diff_gradient(const ScalarFunction& f, const Vector& x, double step) {
  if (!(step > 0.0)) throw Error("finite difference step must be positive");
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    probe[i] = xi + step;
    const double fp = f(probe);
    probe[i] = xi - step;
    const double fm = f(probe);
    probe[i] = xi;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

double max_relative_error(const Vector& analytic, const Vector& numeric) {
  if (analytic.size() != numeric.size()) throw DimensionError("gradient sizes differ");
  double worst = 0.0;
  for (Index i = 0; i < analytic.size(); ++i)
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / (std::abs(numeric[i]) + 1e-8));
  return worst;
}

double finite_diff_check(const MlpSpec& spec, const Vector& params, const Matrix& inputs, const LossClosure& loss,
                         double step) {
  Vector analytic = mlp_gradient(spec, params, inputs, loss).grad;
  auto f = [&](const Vector& p) { return loss(mlp_forward(spec, p, inputs)).value; };
  return max_relative_error(analytic, finite_diff_gradient(f, params, step));
}

double finite_diff_check(const ScalarFunction& f, const Vector& x, const Vector& analytic, double step) {
  return max_relative_error(analytic, finite_diff_gradient(f, x, step));
}

}  // namespace skilldisc::diffnet
