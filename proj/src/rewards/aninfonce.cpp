#include "skilldisc/rewards/aninfonce.hpp"

#include <cmath>

namespace skilldisc::rewards {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

namespace {

double sigmoid(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

double lambda_raw_for(double value) {
  const double target = value - DiversityEncoder::kLambdaFloor;
  if (!(target > 0.0)) throw Error("metric entries must exceed the positivity floor");
  return target > 30.0 ? target : std::log(std::expm1(target));
}

DiversityEncoder DiversityEncoder::make(const diffnet::MlpSpec& spec, Rng& rng) {
  DiversityEncoder e;
  e.encoder = diffnet::Network::init(spec, rng);
  e.lambda_raw = Vector::Constant(spec.output_dim, lambda_raw_for(1.0));
  e.opt = diffnet::AdamState(e.parameter_count());
  return e;
}

Vector DiversityEncoder::lambda() const {
  return lambda_raw.unaryExpr([](double r) { return softplus(r) + kLambdaFloor; });
}

Vector DiversityEncoder::flat_params() const {
  Vector flat(parameter_count());
  flat << encoder.params, lambda_raw;
  return flat;
}

void DiversityEncoder::set_flat_params(const Vector& flat) {
  if (flat.size() != parameter_count()) throw DimensionError("diversity encoder: flat parameter size mismatch");
  encoder.params = flat.head(encoder.size());
  lambda_raw = flat.tail(lambda_raw.size());
}

double aninfonce_objective(const Vector& anchor, const Vector& positive, const Matrix& negatives,
                           const Vector& lambda) {
  if (negatives.cols() < 1) throw Error("AnInfoNCE needs at least one negative");
  const double pos = -(positive - anchor).cwiseAbs2().dot(lambda);
  Vector logits(negatives.cols() + 1);
  logits[0] = pos;
  for (Index i = 0; i < negatives.cols(); ++i) logits[i + 1] = -(negatives.col(i) - anchor).cwiseAbs2().dot(lambda);
  const double m = logits.maxCoeff();
  return pos - (m + std::log((logits.array() - m).exp().sum()));
}

AnInfoNceValue aninfonce(const DiversityEncoder& enc, const Vector& anchor, const Vector& positive,
                         const std::vector<Vector>& negatives) {
  if (negatives.empty()) throw Error("AnInfoNCE needs at least one negative");
  Matrix states(anchor.size(), static_cast<Index>(negatives.size()) + 2);
  states.col(0) = anchor;
  states.col(1) = positive;
  for (std::size_t i = 0; i < negatives.size(); ++i) states.col(static_cast<Index>(i) + 2) = negatives[i];
  Matrix emb = enc.encoder(states);
  const double r = aninfonce_objective(emb.col(0), emb.col(1), emb.rightCols(emb.cols() - 2), enc.lambda());
  return {-r, r};
}

AnInfoNceBatchResult aninfonce_batch(const DiversityEncoder& enc, const ContrastiveBatch& batch, bool with_grad) {
  const Index b = batch.anchors.cols();
  if (b < 1 || batch.positives.cols() != b || static_cast<Index>(batch.skills.size()) != b)
    throw DimensionError("contrastive batch: anchors, positives and skills must align");
  const Index d = enc.embed_dim();
  const Vector lambda = enc.lambda();

  Matrix states(batch.anchors.rows(), 2 * b);
  states << batch.anchors, batch.positives;
  diffnet::MlpTape tape = enc.encoder.tape(states);
  const auto fa = tape.output().leftCols(b);
  const auto fp = tape.output().rightCols(b);

  AnInfoNceBatchResult out;
  out.rewards = Vector::Zero(b);
  Matrix d_emb;
  Vector d_lambda;
  if (with_grad) {
    d_emb = Matrix::Zero(d, 2 * b);
    d_lambda = Vector::Zero(d);
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  std::vector<Index> negs;
  negs.reserve(static_cast<std::size_t>(b));
  Vector logits;
  for (Index i = 0; i < b; ++i) {
    negs.clear();
    for (Index j = 0; j < b; ++j)
      if (batch.skills[j] != batch.skills[i]) negs.push_back(j);
    if (negs.empty()) continue;
    const Index m = static_cast<Index>(negs.size());
    logits.resize(m + 1);
    const Vector pos_diff = fp.col(i) - fa.col(i);
    logits[0] = -pos_diff.cwiseAbs2().dot(lambda);
    for (Index k = 0; k < m; ++k) logits[k + 1] = -(fa.col(negs[k]) - fa.col(i)).cwiseAbs2().dot(lambda);
    const double mx = logits.maxCoeff();
    Vector e = (logits.array() - mx).exp();
    const double z = e.sum();
    const double reward = logits[0] - (mx + std::log(z));
    out.rewards[i] = reward;
    out.loss -= reward * inv_b;
    if (!with_grad) continue;
    // dloss/dlogit: (p_0 - 1)/B for the positive, p_k/B for each negative.
    const Vector p = e / z;
    const double g0 = (p[0] - 1.0) * inv_b;
    // logit = -sum_c lambda_c diff_c^2, with diff = other - anchor.
    d_emb.col(b + i) += g0 * (-2.0) * lambda.cwiseProduct(pos_diff);
    d_emb.col(i) += g0 * 2.0 * lambda.cwiseProduct(pos_diff);
    d_lambda += g0 * (-pos_diff.cwiseAbs2());
    for (Index k = 0; k < m; ++k) {
      const double gk = p[k + 1] * inv_b;
      const Vector diff = fa.col(negs[k]) - fa.col(i);
      d_emb.col(negs[k]) += gk * (-2.0) * lambda.cwiseProduct(diff);
      d_emb.col(i) += gk * 2.0 * lambda.cwiseProduct(diff);
      d_lambda += gk * (-diff.cwiseAbs2());
    }
  }
  if (!std::isfinite(out.loss)) throw NonFiniteError("AnInfoNCE loss is not finite");
  if (with_grad) {
    out.grad.resize(enc.parameter_count());
    out.grad.head(enc.encoder.size()) = enc.encoder.backward(tape, d_emb);
    for (Index c = 0; c < d; ++c) out.grad[enc.encoder.size() + c] = d_lambda[c] * sigmoid(enc.lambda_raw[c]);
  }
  return out;
}

double aninfonce_update(DiversityEncoder& enc, const ContrastiveBatch& batch, double lr) {
  AnInfoNceBatchResult r = aninfonce_batch(enc, batch, true);
  Vector flat = enc.flat_params();
  diffnet::adam_step(flat, r.grad, enc.opt, lr);
  enc.set_flat_params(flat);
  return r.loss;
}

}  // namespace skilldisc::rewards
