#pragma once

#include <cstdint>
#include <optional>

#include "skilldisc/common.hpp"

namespace skilldisc::surgery {

/// Which slice of the flattened gradient takes part in the projection.
/// Coordinates outside the slice are summed without modification.
struct ParameterSlice {
  Index offset = 0;
  Index length = 0;
};

struct SurgeryConfig {
  double projection_probability = 0.5;  // chance of projecting the diversity gradient
  bool enabled = true;
  std::optional<ParameterSlice> slice;  // unset: whole vector

  void validate() const {
    if (!(projection_probability >= 0.0 && projection_probability <= 1.0))
      throw Error("surgery.projection_probability must lie in [0, 1]");
  }
};

struct ConflictStats {
  std::int64_t steps_total = 0;
  std::int64_t steps_conflicting = 0;
  double last_dot = 0.0;

  ConflictStats& operator+=(const ConflictStats& o) {
    steps_total += o.steps_total;
    steps_conflicting += o.steps_conflicting;
    last_dot = o.last_dot;
    return *this;
  }
};

enum class Projected { none, diversity, exploration };

template <typename Scalar>
struct SurgeryResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g_final;
  Projected projected = Projected::none;
  Scalar dot = 0;
};

template <typename A, typename B>
bool detect_conflict(const Eigen::MatrixBase<A>& g_div, const Eigen::MatrixBase<B>& g_expl) {
  if (g_div.size() != g_expl.size()) throw DimensionError("detect_conflict: gradient lengths differ");
  return g_div.dot(g_expl) < 0;
}

/// g minus its component along `onto`.
template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, 1> project_out(const Eigen::MatrixBase<A>& g,
                                                               const Eigen::MatrixBase<B>& onto) {
  if (g.size() != onto.size()) throw DimensionError("project_out: gradient lengths differ");
  const auto nn = onto.squaredNorm();
  if (!(nn > 0)) throw Error("project_out: cannot project onto a zero vector");
  return g - (g.dot(onto) / nn) * onto;
}

/// Combines the two objective gradients. On conflict (negative inner
/// product) exactly one of them is projected onto the orthogonal complement
/// of the other: the diversity gradient with probability p, otherwise the
/// exploration gradient. The rng is consulted only when a conflict occurs.
template <typename A, typename B>
SurgeryResult<typename A::Scalar> surgery(const Eigen::MatrixBase<A>& g_div, const Eigen::MatrixBase<B>& g_expl,
                                          const SurgeryConfig& config, ConflictStats& stats, Rng& rng) {
  using Scalar = typename A::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (g_div.size() != g_expl.size()) throw DimensionError("surgery: gradient lengths differ");
  config.validate();
  const Index off = config.slice ? config.slice->offset : 0;
  const Index len = config.slice ? config.slice->length : g_div.size();
  if (off < 0 || len < 0 || off + len > g_div.size()) throw DimensionError("surgery: slice out of range");

  SurgeryResult<Scalar> r;
  const auto sd = g_div.segment(off, len);
  const auto se = g_expl.segment(off, len);
  r.dot = sd.dot(se);
  stats.steps_total += 1;
  stats.last_dot = static_cast<double>(r.dot);
  if (!(r.dot < 0) || !config.enabled) {
    r.g_final = g_div + g_expl;
    if (r.dot < 0) stats.steps_conflicting += 1;
    return r;
  }
  stats.steps_conflicting += 1;
  Vec div = g_div;
  Vec expl = g_expl;
  if (uniform01(rng) < config.projection_probability) {
    div.segment(off, len) = project_out(sd, se);
    r.projected = Projected::diversity;
  } else {
    expl.segment(off, len) = project_out(se, sd);
    r.projected = Projected::exploration;
  }
  r.g_final = div + expl;
  return r;
}

/// steps_conflicting / steps_total.
inline double conflict_ratio(const ConflictStats& stats) {
  if (stats.steps_total <= 0) throw Error("conflict_ratio: no steps recorded");
  return static_cast<double>(stats.steps_conflicting) / static_cast<double>(stats.steps_total);
}

}  // namespace skilldisc::surgery
