#pragma once

#include "skilldisc/common.hpp"

namespace skilldisc::rewards {

/// Whether to add 1 inside the logarithm. `shifted` keeps duplicate particles
/// finite; `raw` is the bare log-sum used for scale-equivariance checks.
enum class EntropyLog { shifted, raw };

/// Per-particle k-nearest-neighbour entropy reward over the columns of
/// `particles`:
///   r_i = log(1 + sum_{l<=k} max(R_{i,l} - clip, 0))
/// where R_{i,l} is the Euclidean distance to the l-th nearest other particle.
/// Distances are computed pairwise without approximation.
Vector particle_entropy_rewards(const Matrix& particles, int k, double knn_clip,
                                EntropyLog mode = EntropyLog::shifted);

}  // namespace skilldisc::rewards
