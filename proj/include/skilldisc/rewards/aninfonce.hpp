#pragma once

#include <vector>

#include "skilldisc/diffnet/adam.hpp"
#include "skilldisc/diffnet/mlp.hpp"

namespace skilldisc::rewards {

/// State encoder f with a learnable diagonal metric. The metric is stored as
/// unconstrained raw values and mapped through softplus (plus a tiny floor)
/// so its diagonal stays strictly positive under any update.
struct DiversityEncoder {
  diffnet::Network encoder;
  Vector lambda_raw;
  diffnet::AdamState opt;  // over [encoder params, lambda_raw]

  static constexpr double kLambdaFloor = 1e-6;

  /// Metric initialised to the identity.
  static DiversityEncoder make(const diffnet::MlpSpec& spec, Rng& rng);

  Vector lambda() const;
  int embed_dim() const { return encoder.spec.output_dim; }
  Index parameter_count() const { return encoder.size() + lambda_raw.size(); }
  Vector flat_params() const;
  void set_flat_params(const Vector& flat);
};

double softplus(double x);
/// Raw value whose mapped metric entry equals `value`.
double lambda_raw_for(double value);

/// ln[ e(s+, s) / (e(s+, s) + sum_i e(s-_i, s)) ] with e(x, y) = exp(-||x - y||^2_L),
/// evaluated on embeddings. Negatives are the columns of `negatives`.
double aninfonce_objective(const Vector& anchor, const Vector& positive, const Matrix& negatives,
                           const Vector& lambda);

struct AnInfoNceValue {
  double loss = 0.0;    // -reward
  double reward = 0.0;  // diversity reward, always < 0
};

AnInfoNceValue aninfonce(const DiversityEncoder& enc, const Vector& anchor, const Vector& positive,
                         const std::vector<Vector>& negatives);

/// Anchors and positives share a skill label; anchor j is a negative for
/// anchor i exactly when skills[j] != skills[i].
struct ContrastiveBatch {
  Matrix anchors;    // state_dim x B
  Matrix positives;  // state_dim x B
  std::vector<int> skills;
};

struct AnInfoNceBatchResult {
  double loss = 0.0;  // mean of -reward over anchors
  Vector rewards;     // per anchor; 0 for anchors without negatives
  Vector grad;        // w.r.t. flat_params(), empty unless requested
};

AnInfoNceBatchResult aninfonce_batch(const DiversityEncoder& enc, const ContrastiveBatch& batch, bool with_grad);

/// One Adam step on encoder and metric; returns the pre-update loss.
double aninfonce_update(DiversityEncoder& enc, const ContrastiveBatch& batch, double lr);

}  // namespace skilldisc::rewards
