#pragma once

#include "skilldisc/diffnet/adam.hpp"
#include "skilldisc/diffnet/mlp.hpp"

namespace skilldisc::rewards {

/// Transition-pair encoder and skill encoder trained with the contrastive
/// transition/skill alignment loss. Both map into the same embedding space.
struct CicEncoders {
  diffnet::Network pair_encoder;   // (s_t, s_{t+1}) -> R^d
  diffnet::Network skill_encoder;  // one-hot skill -> R^d
  double temperature = 0.5;
  diffnet::AdamState pair_opt;
  diffnet::AdamState skill_opt;

  static CicEncoders make(int state_dim, int n_skills, int embed_dim, int hidden, double temperature, Rng& rng);
  void validate() const;
};

struct CicLossResult {
  double loss = 0.0;
  Vector grad_pair;   // w.r.t. pair_encoder params
  Vector grad_skill;  // w.r.t. skill_encoder params
};

/// Loss and gradients w.r.t. the embeddings themselves (d x N each).
struct EmbeddingLoss {
  double loss = 0.0;
  Matrix grad_pair;
  Matrix grad_skill;
};

/// Mean over anchors i of
///   -( cos(x_i, y_i) / T - log( (1/N) sum_j exp(cos(x_j, y_i) / T) ) ).
/// Throws on a zero-norm embedding.
EmbeddingLoss cic_loss_from_embeddings(const Matrix& pair_emb, const Matrix& skill_emb, double temperature);

/// `pairs` is (2 * state_dim) x N, `skills` is n_skills x N (one-hot columns).
CicLossResult cic_loss(const CicEncoders& enc, const Matrix& pairs, const Matrix& skills);

/// One Adam step on both encoders; returns the pre-update loss.
double cic_update(CicEncoders& enc, const Matrix& pairs, const Matrix& skills, double lr);

/// Embeddings of transitions, used as particles for the entropy estimate.
inline Matrix cic_embed_pairs(const CicEncoders& enc, const Matrix& pairs) { return enc.pair_encoder(pairs); }

}  // namespace skilldisc::rewards
