#pragma once

#include <vector>

#include "skilldisc/common.hpp"

namespace skilldisc::metrics {

/// Probability vector over a finite outcome space.
class CategoricalDistribution {
 public:
  CategoricalDistribution() = default;
  /// Validates non-negativity and a unit sum within 1e-12.
  explicit CategoricalDistribution(Vector probs);

  static CategoricalDistribution uniform(Index k);
  static CategoricalDistribution point_mass(Index k, Index at);
  /// Normalised counts; throws when all counts are zero.
  static CategoricalDistribution from_counts(const Vector& counts);

  const Vector& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  double operator[](Index i) const { return probs_[i]; }

  /// Mixture (1 - w) * this + w * other.
  CategoricalDistribution mix(const CategoricalDistribution& other, double w) const;

 private:
  Vector probs_;
};

/// Half the L1 distance.
double tv_distance(const CategoricalDistribution& p, const CategoricalDistribution& q);

/// Index of the closest distribution in total variation; lowest index on ties.
Index greedy_select(const CategoricalDistribution& empirical, const std::vector<CategoricalDistribution>& skills);

/// Draws the outcome counts of `n` i.i.d. samples (a multinomial draw).
Vector sample_counts(const CategoricalDistribution& p, long n, Rng& rng);

}  // namespace skilldisc::metrics
