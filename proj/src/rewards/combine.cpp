#include "skilldisc/rewards/combine.hpp"

#include <cmath>

namespace skilldisc::rewards {

void RewardWeights::validate() const {
  if (alpha < 0.0) throw Error("rewards.alpha must be >= 0");
  if (beta < 0.0) throw Error("rewards.beta must be >= 0");
  if (k_neighbors < 1) throw Error("rewards.knn_k must be >= 1");
  if (knn_clip < 0.0) throw Error("rewards.knn_clip must be >= 0");
}

CombinedRewards combine_rewards(const RewardWeights& w, const Vector& r_entropy, const Vector& r_rnd,
                                const Vector& r_diversity) {
  if (r_entropy.size() != r_rnd.size() || r_entropy.size() != r_diversity.size())
    throw DimensionError("reward streams must have equal length");
  CombinedRewards c;
  c.exploration = w.alpha * r_entropy + w.beta * r_rnd;
  c.diversity = r_diversity;
  c.total = c.exploration + c.diversity;
  return c;
}

void RunningMeanStd::update(const Vector& batch) {
  if (batch.size() == 0) return;
  const double n = static_cast<double>(batch.size());
  const double bmean = batch.mean();
  const double bm2 = (batch.array() - bmean).square().sum();
  const double delta = bmean - mean_;
  const double total = count_ + n;
  mean_ += delta * n / total;
  m2_ += bm2 + delta * delta * count_ * n / total;
  count_ = total;
}

Vector RunningMeanStd::standardize(const Vector& x) const {
  return (x.array() - mean_) / (std::sqrt(variance()) + 1e-8);
}

}  // namespace skilldisc::rewards
