#include "skilldisc/diffnet/mlp.hpp"

#include <cmath>
#include <sstream>

namespace skilldisc::diffnet {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw Error("unknown activation '" + name + "'");
}

MlpSpec MlpSpec::make(int input_dim, std::vector<int> hidden_dims, int output_dim, Activation hidden,
                      Activation output) {
  MlpSpec s;
  s.input_dim = input_dim;
  s.hidden_dims = std::move(hidden_dims);
  s.output_dim = output_dim;
  s.activations.assign(s.hidden_dims.size(), hidden);
  s.activations.push_back(output);
  s.validate();
  return s;
}

void MlpSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) throw DimensionError("MlpSpec: dimensions must be >= 1");
  for (int h : hidden_dims)
    if (h < 1) throw DimensionError("MlpSpec: hidden dimensions must be >= 1");
  if (static_cast<int>(activations.size()) != num_layers())
    throw DimensionError("MlpSpec: need one activation per layer");
}

Index MlpSpec::parameter_count() const {
  Index n = 0;
  for (int l = 0; l < num_layers(); ++l) n += static_cast<Index>(fan_in(l) + 1) * fan_out(l);
  return n;
}

Index MlpSpec::weight_offset(int layer) const {
  Index n = 0;
  for (int l = 0; l < layer; ++l) n += static_cast<Index>(fan_in(l) + 1) * fan_out(l);
  return n;
}

std::string MlpSpec::descriptor() const {
  std::ostringstream os;
  os << input_dim << ':';
  for (std::size_t i = 0; i < hidden_dims.size(); ++i) os << (i ? "," : "") << hidden_dims[i];
  os << ':' << output_dim << ':';
  for (std::size_t i = 0; i < activations.size(); ++i) os << (i ? "," : "") << to_string(activations[i]);
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_dim(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw Error("MlpSpec descriptor: bad dimension '" + s + "'");
  }
  if (pos != s.size()) throw Error("MlpSpec descriptor: bad dimension '" + s + "'");
  return v;
}

}  // namespace

MlpSpec MlpSpec::from_descriptor(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 4) throw Error("MlpSpec descriptor: expected 4 fields in '" + text + "'");
  MlpSpec s;
  s.input_dim = parse_dim(parts[0]);
  if (!parts[1].empty())
    for (const auto& h : split(parts[1], ',')) s.hidden_dims.push_back(parse_dim(h));
  s.output_dim = parse_dim(parts[2]);
  for (const auto& a : split(parts[3], ',')) s.activations.push_back(activation_from_string(a));
  s.validate();
  return s;
}

Eigen::Map<const Matrix> weights(const MlpSpec& spec, const Vector& params, int layer) {
  return {params.data() + spec.weight_offset(layer), spec.fan_out(layer), spec.fan_in(layer)};
}

Eigen::Map<const Vector> bias(const MlpSpec& spec, const Vector& params, int layer) {
  Index off = spec.weight_offset(layer) + static_cast<Index>(spec.fan_out(layer)) * spec.fan_in(layer);
  return {params.data() + off, spec.fan_out(layer)};
}

namespace {

void check_params(const MlpSpec& spec, const Vector& params) {
  if (params.size() != spec.parameter_count())
    throw DimensionError("parameter vector has " + std::to_string(params.size()) + " entries, spec needs " +
                         std::to_string(spec.parameter_count()));
}

void check_input(const MlpSpec& spec, const Matrix& inputs) {
  if (inputs.rows() != spec.input_dim)
    throw DimensionError("input has " + std::to_string(inputs.rows()) + " rows, spec expects " +
                         std::to_string(spec.input_dim));
}

void apply_activation(Activation a, Matrix& z) {
  switch (a) {
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::tanh: z = z.array().tanh().matrix(); break;
    case Activation::identity: break;
  }
}

// Multiplies `delta` in place by the activation derivative, written via the output.
void apply_activation_grad(Activation a, const Matrix& out, Matrix& delta) {
  switch (a) {
    case Activation::relu: delta.array() *= (out.array() > 0.0).cast<double>(); break;
    case Activation::tanh: delta.array() *= 1.0 - out.array().square(); break;
    case Activation::identity: break;
  }
}

}  // namespace

Matrix mlp_forward(const MlpSpec& spec, const Vector& params, const Matrix& inputs) {
  check_params(spec, params);
  check_input(spec, inputs);
  Matrix x = inputs;
  for (int l = 0; l < spec.num_layers(); ++l) {
    Matrix z = weights(spec, params, l) * x;
    z.colwise() += bias(spec, params, l);
    apply_activation(spec.activations[l], z);
    x = std::move(z);
  }
  return x;
}

Vector mlp_forward(const MlpSpec& spec, const Vector& params, const Vector& input) {
  Matrix in = input;
  return mlp_forward(spec, params, in).col(0);
}

MlpTape mlp_forward_tape(const MlpSpec& spec, const Vector& params, const Matrix& inputs) {
  check_params(spec, params);
  check_input(spec, inputs);
  MlpTape tape;
  tape.activations.reserve(spec.num_layers() + 1);
  tape.activations.push_back(inputs);
  for (int l = 0; l < spec.num_layers(); ++l) {
    Matrix z = weights(spec, params, l) * tape.activations.back();
    z.colwise() += bias(spec, params, l);
    apply_activation(spec.activations[l], z);
    tape.activations.push_back(std::move(z));
  }
  return tape;
}

Vector mlp_backward(const MlpSpec& spec, const Vector& params, const MlpTape& tape, const Matrix& output_grad,
                    Matrix* input_grad) {
  check_params(spec, params);
  if (output_grad.rows() != spec.output_dim || output_grad.cols() != tape.batch_size())
    throw DimensionError("output gradient shape does not match the forward tape");
  Vector grad(spec.parameter_count());
  Matrix delta = output_grad;
  for (int l = spec.num_layers() - 1; l >= 0; --l) {
    apply_activation_grad(spec.activations[l], tape.activations[l + 1], delta);
    Index off = spec.weight_offset(l);
    Index nw = static_cast<Index>(spec.fan_out(l)) * spec.fan_in(l);
    Eigen::Map<Matrix> gw(grad.data() + off, spec.fan_out(l), spec.fan_in(l));
    gw.noalias() = delta * tape.activations[l].transpose();
    grad.segment(off + nw, spec.fan_out(l)) = delta.rowwise().sum();
    if (l > 0 || input_grad) {
      Matrix prev = weights(spec, params, l).transpose() * delta;
      delta = std::move(prev);
    }
  }
  if (input_grad) *input_grad = std::move(delta);
  return grad;
}

LossAndGradient mlp_gradient(const MlpSpec& spec, const Vector& params, const Matrix& inputs,
                             const LossClosure& loss) {
  MlpTape tape = mlp_forward_tape(spec, params, inputs);
  LossValue lv = loss(tape.output());
  if (!std::isfinite(lv.value)) {
    Index bad = -1;
    for (Index j = 0; j < tape.batch_size() && bad < 0; ++j) {
      bool col_ok = tape.output().col(j).allFinite() &&
                    (lv.output_grad.cols() <= j || lv.output_grad.col(j).allFinite());
      if (!col_ok) bad = j;
    }
    throw NonFiniteError("non-finite loss", bad);
  }
  Vector grad = mlp_backward(spec, params, tape, lv.output_grad);
  return {lv.value, std::move(grad)};
}

Vector param_init(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  Vector p = Vector::Zero(spec.parameter_count());
  for (int l = 0; l < spec.num_layers(); ++l) {
    double limit = std::sqrt(1.0 / spec.fan_in(l));
    std::uniform_real_distribution<double> u(-limit, limit);
    Index off = spec.weight_offset(l);
    Index nw = static_cast<Index>(spec.fan_out(l)) * spec.fan_in(l);
    for (Index i = 0; i < nw; ++i) p[off + i] = u(rng);
  }
  return p;
}

Network::Network(MlpSpec s, Vector p) : spec(std::move(s)), params(std::move(p)) {
  check_params(spec, params);
}

}  // namespace skilldisc::diffnet
