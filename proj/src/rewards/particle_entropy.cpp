#include "skilldisc/rewards/particle_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace skilldisc::rewards {

Vector particle_entropy_rewards(const Matrix& particles, int k, double knn_clip, EntropyLog mode) {
  const Index n = particles.cols();
  if (k < 1) throw Error("knn k must be >= 1");
  if (k >= n) throw Error("knn k (" + std::to_string(k) + ") must be smaller than the particle count (" +
                          std::to_string(n) + ")");
  if (knn_clip < 0.0) throw Error("knn clip must be >= 0");
  Vector rewards(n);
  std::vector<double> dist(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (Index j = 0; j < n; ++j)
      if (j != i) dist[w++] = (particles.col(j) - particles.col(i)).norm();
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    double sum = 0.0;
    for (int l = 0; l < k; ++l) sum += std::max(dist[l] - knn_clip, 0.0);
    rewards[i] = mode == EntropyLog::shifted ? std::log1p(sum) : std::log(sum);
  }
  return rewards;
}

}  // namespace skilldisc::rewards
