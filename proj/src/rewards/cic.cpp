#include "skilldisc/rewards/cic.hpp"

#include <cmath>

namespace skilldisc::rewards {

using diffnet::Activation;
using diffnet::MlpSpec;
using diffnet::Network;

CicEncoders CicEncoders::make(int state_dim, int n_skills, int embed_dim, int hidden, double temperature, Rng& rng) {
  CicEncoders e;
  e.pair_encoder = Network::init(MlpSpec::make(2 * state_dim, {hidden, hidden}, embed_dim), rng);
  e.skill_encoder = Network::init(MlpSpec::make(n_skills, {hidden, hidden}, embed_dim), rng);
  e.temperature = temperature;
  e.pair_opt = diffnet::AdamState(e.pair_encoder.size());
  e.skill_opt = diffnet::AdamState(e.skill_encoder.size());
  e.validate();
  return e;
}

void CicEncoders::validate() const {
  if (!(temperature > 0.0)) throw Error("CIC temperature must be > 0");
  if (pair_encoder.spec.output_dim != skill_encoder.spec.output_dim)
    throw DimensionError("CIC encoders must share the embedding dimension");
}

namespace {

// d(x/|x|) backprop: (g - u (u.g)) / |x| per column.
Matrix normalize_backward(const Matrix& unit, const Vector& norms, const Matrix& grad_unit) {
  Matrix out(unit.rows(), unit.cols());
  for (Index j = 0; j < unit.cols(); ++j) {
    const double proj = unit.col(j).dot(grad_unit.col(j));
    out.col(j) = (grad_unit.col(j) - proj * unit.col(j)) / norms[j];
  }
  return out;
}

}  // namespace

EmbeddingLoss cic_loss_from_embeddings(const Matrix& pair_emb, const Matrix& skill_emb, double temperature) {
  const Index n = pair_emb.cols();
  if (n < 2) throw Error("CIC loss needs at least two samples");
  if (skill_emb.cols() != n || skill_emb.rows() != pair_emb.rows())
    throw DimensionError("CIC embeddings must have matching shapes");
  if (!(temperature > 0.0)) throw Error("CIC temperature must be > 0");

  Vector nx = pair_emb.colwise().norm().transpose();
  Vector ny = skill_emb.colwise().norm().transpose();
  for (Index j = 0; j < n; ++j)
    if (nx[j] == 0.0 || ny[j] == 0.0) throw Error("CIC loss: zero-norm embedding at batch index " + std::to_string(j));
  Matrix u = pair_emb.array().rowwise() / nx.transpose().array();
  Matrix v = skill_emb.array().rowwise() / ny.transpose().array();

  // s(j, i) = cos(x_j, y_i) / T
  Matrix s = (u.transpose() * v) / temperature;
  Matrix dlogits(n, n);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double m = s.col(i).maxCoeff();
    Vector e = (s.col(i).array() - m).exp();
    const double z = e.sum();
    const double lme = m + std::log(z) - std::log(static_cast<double>(n));
    total += s(i, i) - lme;
    dlogits.col(i) = e / z;
    dlogits(i, i) -= 1.0;
  }
  const double scale = 1.0 / static_cast<double>(n);
  Matrix dcos = dlogits * (scale / temperature);
  Matrix du = v * dcos.transpose();
  Matrix dv = u * dcos;
  return {-total * scale, normalize_backward(u, nx, du), normalize_backward(v, ny, dv)};
}

CicLossResult cic_loss(const CicEncoders& enc, const Matrix& pairs, const Matrix& skills) {
  auto tp = enc.pair_encoder.tape(pairs);
  auto ts = enc.skill_encoder.tape(skills);
  EmbeddingLoss el = cic_loss_from_embeddings(tp.output(), ts.output(), enc.temperature);
  if (!std::isfinite(el.loss)) throw NonFiniteError("CIC loss is not finite");
  return {el.loss, enc.pair_encoder.backward(tp, el.grad_pair), enc.skill_encoder.backward(ts, el.grad_skill)};
}

double cic_update(CicEncoders& enc, const Matrix& pairs, const Matrix& skills, double lr) {
  CicLossResult r = cic_loss(enc, pairs, skills);
  diffnet::adam_step(enc.pair_encoder.params, r.grad_pair, enc.pair_opt, lr);
  diffnet::adam_step(enc.skill_encoder.params, r.grad_skill, enc.skill_opt, lr);
  return r.loss;
}

}  // namespace skilldisc::rewards
