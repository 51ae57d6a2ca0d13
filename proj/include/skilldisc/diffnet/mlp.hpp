#pragma once

#include <functional>
#include <string>
#include <vector>

#include "skilldisc/common.hpp"

namespace skilldisc::diffnet {

enum class Activation { relu, tanh, identity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

/// Shape of a fully connected network. `activations[l]` is applied to the
/// output of layer l, so there is one entry per weight matrix.
struct MlpSpec {
  int input_dim = 1;
  std::vector<int> hidden_dims;
  int output_dim = 1;
  std::vector<Activation> activations;

  /// Hidden layers share `hidden`, the output layer uses `output`.
  static MlpSpec make(int input_dim, std::vector<int> hidden_dims, int output_dim,
                      Activation hidden = Activation::relu, Activation output = Activation::identity);

  int num_layers() const { return static_cast<int>(hidden_dims.size()) + 1; }
  int fan_in(int layer) const { return layer == 0 ? input_dim : hidden_dims[layer - 1]; }
  int fan_out(int layer) const { return layer == num_layers() - 1 ? output_dim : hidden_dims[layer]; }

  /// Sum over layers of (fan_in + 1) * fan_out.
  Index parameter_count() const;
  /// Offset of layer `layer`'s weight block; its bias follows the weights.
  Index weight_offset(int layer) const;

  void validate() const;

  /// Compact descriptor, e.g. "4:128,128:16:relu,relu,identity".
  std::string descriptor() const;
  static MlpSpec from_descriptor(const std::string& text);

  bool operator==(const MlpSpec&) const = default;
};

/// Weight matrix of `layer` viewed in place (fan_out x fan_in, column-major).
Eigen::Map<const Matrix> weights(const MlpSpec& spec, const Vector& params, int layer);
Eigen::Map<const Vector> bias(const MlpSpec& spec, const Vector& params, int layer);

/// Activations recorded by a forward pass; consumed by `mlp_backward`.
/// Post-activation values suffice: every supported activation has a derivative
/// expressible through its output.
struct MlpTape {
  std::vector<Matrix> activations;  // [0] is the input batch, [l + 1] the output of layer l
  const Matrix& output() const { return activations.back(); }
  Index batch_size() const { return activations.front().cols(); }
};

/// Columns of `inputs` are samples. Returns output_dim x batch.
Matrix mlp_forward(const MlpSpec& spec, const Vector& params, const Matrix& inputs);
Vector mlp_forward(const MlpSpec& spec, const Vector& params, const Vector& input);

MlpTape mlp_forward_tape(const MlpSpec& spec, const Vector& params, const Matrix& inputs);

/// Reverse pass: gradient of a scalar loss w.r.t. params, given dLoss/dOutput.
/// When `input_grad` is non-null it receives dLoss/dInput.
Vector mlp_backward(const MlpSpec& spec, const Vector& params, const MlpTape& tape,
                    const Matrix& output_grad, Matrix* input_grad = nullptr);

/// Scalar loss over a batch of network outputs together with its gradient.
struct LossValue {
  double value = 0.0;
  Matrix output_grad;
};
using LossClosure = std::function<LossValue(const Matrix& outputs)>;

struct LossAndGradient {
  double loss = 0.0;
  Vector grad;
};

/// Exact reverse-mode gradient of `loss(mlp(inputs))`. Throws NonFiniteError
/// naming the first offending batch column when the loss is not finite.
LossAndGradient mlp_gradient(const MlpSpec& spec, const Vector& params, const Matrix& inputs,
                             const LossClosure& loss);

/// Uniform(-sqrt(1/fan_in), sqrt(1/fan_in)) weights, zero biases.
Vector param_init(const MlpSpec& spec, Rng& rng);

/// A network shape together with its parameters.
struct Network {
  MlpSpec spec;
  Vector params;

  Network() = default;
  Network(MlpSpec s, Vector p);
  static Network init(const MlpSpec& spec, Rng& rng) { return {spec, param_init(spec, rng)}; }

  Matrix operator()(const Matrix& inputs) const { return mlp_forward(spec, params, inputs); }
  MlpTape tape(const Matrix& inputs) const { return mlp_forward_tape(spec, params, inputs); }
  Vector backward(const MlpTape& t, const Matrix& output_grad) const {
    return mlp_backward(spec, params, t, output_grad);
  }
  Index size() const { return params.size(); }
};

}  // namespace skilldisc::diffnet
