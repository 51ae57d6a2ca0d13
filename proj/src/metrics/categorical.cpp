#include "skilldisc/metrics/categorical.hpp"

#include <algorithm>
#include <cmath>

namespace skilldisc::metrics {

CategoricalDistribution::CategoricalDistribution(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw Error("categorical distribution needs at least one outcome");
  if (!probs_.allFinite() || (probs_.array() < 0.0).any())
    throw Error("categorical distribution entries must be finite and non-negative");
  if (std::abs(probs_.sum() - 1.0) > 1e-12) throw Error("categorical distribution must sum to 1");
}

CategoricalDistribution CategoricalDistribution::uniform(Index k) {
  return CategoricalDistribution(Vector::Constant(k, 1.0 / static_cast<double>(k)));
}

CategoricalDistribution CategoricalDistribution::point_mass(Index k, Index at) {
  Vector p = Vector::Zero(k);
  p[at] = 1.0;
  return CategoricalDistribution(p);
}

CategoricalDistribution CategoricalDistribution::from_counts(const Vector& counts) {
  const double total = counts.sum();
  if (!(total > 0.0)) throw Error("cannot normalise an all-zero count vector");
  return CategoricalDistribution(counts / total);
}

CategoricalDistribution CategoricalDistribution::mix(const CategoricalDistribution& other, double w) const {
  if (other.size() != size()) throw DimensionError("mixture of distributions over different spaces");
  Vector p = (1.0 - w) * probs_ + w * other.probs_;
  p /= p.sum();
  return CategoricalDistribution(p);
}

double tv_distance(const CategoricalDistribution& p, const CategoricalDistribution& q) {
  if (p.size() != q.size()) throw DimensionError("tv_distance: outcome spaces differ");
  return 0.5 * (p.probs() - q.probs()).cwiseAbs().sum();
}

Index greedy_select(const CategoricalDistribution& empirical, const std::vector<CategoricalDistribution>& skills) {
  if (skills.empty()) throw Error("greedy_select: no skills");
  Index best = 0;
  double best_d = tv_distance(empirical, skills[0]);
  for (std::size_t z = 1; z < skills.size(); ++z) {
    const double d = tv_distance(empirical, skills[z]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<Index>(z);
    }
  }
  return best;
}

Vector sample_counts(const CategoricalDistribution& p, long n, Rng& rng) {
  // Sequential conditional binomials.
  Vector counts = Vector::Zero(p.size());
  long remaining = n;
  double mass_left = 1.0;
  for (Index i = 0; i < p.size() && remaining > 0; ++i) {
    if (i == p.size() - 1) {
      counts[i] = static_cast<double>(remaining);
      break;
    }
    const double q = mass_left > 0.0 ? std::clamp(p[i] / mass_left, 0.0, 1.0) : 0.0;
    const long c = std::binomial_distribution<long>(remaining, q)(rng);
    counts[i] = static_cast<double>(c);
    remaining -= c;
    mass_left -= p[i];
  }
  return counts;
}

}  // namespace skilldisc::metrics
