#pragma once

#include "skilldisc/common.hpp"

namespace skilldisc::rewards {

struct RewardWeights {
  double alpha = 0.01;   // entropy weight
  double beta = 1e-4;    // RND weight
  int k_neighbors = 16;
  double knn_clip = 5e-4;

  void validate() const;
};

/// Exploration and diversity streams are kept apart for gradient surgery;
/// `total` is their sum.
struct CombinedRewards {
  Vector exploration;
  Vector diversity;
  Vector total;
};

/// exploration = alpha * entropy + beta * rnd; total = exploration + diversity.
CombinedRewards combine_rewards(const RewardWeights& w, const Vector& r_entropy, const Vector& r_rnd,
                                const Vector& r_diversity);

/// Running mean/variance merged batch by batch (Chan et al. parallel update).
class RunningMeanStd {
 public:
  void update(const Vector& batch);
  /// (x - mean) / (std + 1e-8) with the statistics after the latest update.
  Vector standardize(const Vector& x) const;
  double mean() const { return mean_; }
  double variance() const { return count_ > 0 ? m2_ / count_ : 0.0; }
  double count() const { return count_; }

 private:
  double mean_ = 0.0;
  double m2_ = 0.0;
  double count_ = 0.0;
};

}  // namespace skilldisc::rewards
