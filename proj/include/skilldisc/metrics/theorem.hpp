#pragma once

#include <vector>

#include "skilldisc/metrics/categorical.hpp"

namespace skilldisc::metrics {

/// Skill distributions over the trajectory space S^H together with the
/// distribution of the optimal policy. `delta` is the smallest pairwise TV
/// distance between skills, `epsilon` the distance from rho_star to the
/// closest skill and `margin` = delta - 2 epsilon. With a single skill the
/// pairwise minimum is empty and `delta` is +inf.
struct TheoremInstance {
  int n_states = 0;
  int horizon = 0;
  std::vector<CategoricalDistribution> skills;
  CategoricalDistribution rho_star;
  double delta = 0.0;
  double epsilon = 0.0;
  double margin = 0.0;
  Index best_skill = 0;  // exhaustive argmin of TV(rho_star, rho_z)

  static TheoremInstance make(int n_states, int horizon, std::vector<CategoricalDistribution> skills,
                              CategoricalDistribution rho_star);

  /// Skill z puts mass `peak` on trajectory z and spreads the rest
  /// uniformly; rho_star = (1 - mix) rho_0 + mix rho_1. This yields
  /// delta = peak, epsilon = mix * peak and margin = peak (1 - 2 mix).
  static TheoremInstance peaked(int n_states, int horizon, int n_skills, double peak, double mix);

  Index outcome_count() const { return skills.empty() ? 0 : skills.front().size(); }
};

/// S^H, throwing when it does not fit comfortably in memory.
Index trajectory_space_size(int n_states, int horizon);

struct BoundValue {
  double log_value = 0.0;  // S^H log 2 - n margin^2 / 2
  double value = 0.0;      // exp(log_value) clamped to [0, 1]
};

/// Misidentification bound 2^(S^H) exp(-n margin^2 / 2).
BoundValue theorem_bound(int n_states, int horizon, double margin, long n);

/// Smallest n with bound <= eta: ceil(2 / margin^2 (S^H log 2 - log eta)).
long sample_complexity(double margin, double eta, int n_states, int horizon);

struct MisidEstimate {
  double rate = 0.0;
  long trials = 0;
  double standard_error = 0.0;  // sqrt(rate (1 - rate) / trials)
};

/// Fraction of trials in which the greedy selector applied to the empirical
/// distribution of n draws from rho_star misses best_skill. Trials are split
/// in fixed chunks with their own seeds, so the result does not depend on
/// `workers`.
MisidEstimate monte_carlo_misid(const TheoremInstance& instance, long n, long trials, Rng& rng, int workers = 1);

struct TheoremRow {
  int n_states = 0;
  int horizon = 0;
  double margin = 0.0;
  long n = 0;
  double bound = 0.0;
  double log_bound = 0.0;
  double empirical = 0.0;
  long trials = 0;
  double half_width = 0.0;  // 3 standard errors
  bool at_sample_complexity = false;
};

/// One row per n in `n_grid`, plus one at sample_complexity(margin, eta)
/// when it is not already listed.
std::vector<TheoremRow> theorem_report(const TheoremInstance& instance, const std::vector<long>& n_grid, long trials,
                                       double eta, Rng& rng, int workers = 1);

}  // namespace skilldisc::metrics
