#ifndef ACED_MATH_MLP_HPP_
#define ACED_MATH_MLP_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

// Fully-connected net with tanh hidden activations and a linear output
// layer. weights[l] has shape (out_l, in_l); layers chain so that
// cols(weights[l+1]) == rows(weights[l]).
template <typename Scalar>
struct Mlp {
  std::vector<Matrix<Scalar>> weights;
  std::vector<Vector<Scalar>> biases;

  Eigen::Index input_dim() const { return weights.front().cols(); }
  Eigen::Index output_dim() const { return weights.back().rows(); }
  std::size_t layer_count() const { return weights.size(); }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
  }
};

// Same shapes as the net it differentiates.
template <typename Scalar>
struct MlpGrad {
  std::vector<Matrix<Scalar>> d_weights;
  std::vector<Vector<Scalar>> d_biases;
};

// Per-layer post-activation values kept from a forward pass; column b holds
// sample b of the batch. activations[0] is the input itself.
template <typename Scalar>
struct MlpTrace {
  std::vector<Matrix<Scalar>> activations;
};

using Mlpd = Mlp<double>;
using MlpGradd = MlpGrad<double>;
using MlpTraced = MlpTrace<double>;

namespace detail {

template <typename Scalar>
void check_chain(const Mlp<Scalar>& net) {
  if (net.weights.empty() || net.weights.size() != net.biases.size())
    throw ContractError("mlp: empty or mismatched weight/bias lists");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (net.weights[l].rows() != net.biases[l].size())
      throw ContractError("mlp: bias size mismatch at layer " + std::to_string(l));
    if (l + 1 < net.weights.size() && net.weights[l + 1].cols() != net.weights[l].rows())
      throw ContractError("mlp: layer shapes do not chain at layer " + std::to_string(l));
  }
}

}  // namespace detail

// dims = {in, h1, ..., out}. Xavier-uniform weights, zero biases; the output
// layer is scaled by final_layer_scale (small values keep initial policy
// means / value estimates near zero).
template <typename Scalar>
Mlp<Scalar> make_mlp(const std::vector<int>& dims, Rng& rng, Scalar final_layer_scale = Scalar(1)) {
  if (dims.size() < 2) throw ContractError("make_mlp: need at least input and output dims");
  Mlp<Scalar> net;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l], out = dims[l + 1];
    if (in < 1 || out < 1) throw ContractError("make_mlp: non-positive layer dim");
    const Scalar bound = std::sqrt(Scalar(6) / Scalar(in + out));
    Matrix<Scalar> w(out, in);
    for (Eigen::Index j = 0; j < w.size(); ++j)
      w.data()[j] = static_cast<Scalar>(uniform(rng, -double(bound), double(bound)));
    if (l + 2 == dims.size()) w *= final_layer_scale;
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vector<Scalar>::Zero(out));
  }
  return net;
}

template <typename Scalar>
MlpGrad<Scalar> zero_grad_like(const Mlp<Scalar>& net) {
  MlpGrad<Scalar> g;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    g.d_weights.push_back(Matrix<Scalar>::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.d_biases.push_back(Vector<Scalar>::Zero(net.biases[l].size()));
  }
  return g;
}

// Batched forward pass; X holds one sample per column. Fills `trace` for a
// later backward pass.
template <typename Scalar>
Matrix<Scalar> mlp_forward_batch(const Mlp<Scalar>& net, const NoDeduce<Matrix<Scalar>>& X,
                                 MlpTrace<Scalar>* trace = nullptr) {
  detail::check_chain(net);
  if (X.rows() != net.input_dim())
    throw ContractError("mlp_forward: input dim " + std::to_string(X.rows()) + " != expected " +
                        std::to_string(net.input_dim()));
  if (trace) {
    trace->activations.clear();
    trace->activations.push_back(X);
  }
  Matrix<Scalar> a = X;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Matrix<Scalar> z = (net.weights[l] * a).colwise() + net.biases[l];
    if (l + 1 < net.weights.size()) z = z.array().tanh().matrix();
    a = std::move(z);
    if (trace) trace->activations.push_back(a);
  }
  return a;
}

template <typename Scalar>
Vector<Scalar> mlp_forward(const Mlp<Scalar>& net, const NoDeduce<Vector<Scalar>>& input,
                           MlpTrace<Scalar>* trace = nullptr) {
  return mlp_forward_batch<Scalar>(net, input, trace);
}

// Reverse-mode gradients of sum_b output(:,b) . upstream(:,b) with respect to
// every weight, bias and the input. `trace` must come from a forward pass of
// the same net. Gradients are summed over the batch; d_input (if requested)
// has one column per sample.
template <typename Scalar>
MlpGrad<Scalar> mlp_backward_batch(const Mlp<Scalar>& net, const MlpTrace<Scalar>& trace,
                                   const NoDeduce<Matrix<Scalar>>& upstream,
                                   Matrix<Scalar>* d_input = nullptr) {
  const std::size_t L = net.weights.size();
  if (trace.activations.size() != L + 1) throw ContractError("mlp_backward: stale trace");
  if (upstream.rows() != net.output_dim() || upstream.cols() != trace.activations[0].cols())
    throw ContractError("mlp_backward: upstream shape mismatch");

  MlpGrad<Scalar> grad;
  grad.d_weights.resize(L);
  grad.d_biases.resize(L);

  Matrix<Scalar> delta = upstream;  // d(objective)/d(pre-activation of layer l)
  for (std::size_t l = L; l-- > 0;) {
    grad.d_weights[l].noalias() = delta * trace.activations[l].transpose();
    grad.d_biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Matrix<Scalar> da = net.weights[l].transpose() * delta;
      // activations[l] is tanh output of layer l-1's successor input
      delta = da.cwiseProduct((Scalar(1) - trace.activations[l].array().square()).matrix());
    } else if (d_input) {
      d_input->noalias() = net.weights[0].transpose() * delta;
    }
  }
  return grad;
}

template <typename Scalar>
MlpGrad<Scalar> mlp_backward(const Mlp<Scalar>& net, const MlpTrace<Scalar>& trace,
                             const NoDeduce<Vector<Scalar>>& upstream,
                             Vector<Scalar>* d_input = nullptr) {
  Matrix<Scalar> dx;
  MlpGrad<Scalar> g =
      mlp_backward_batch<Scalar>(net, trace, upstream, d_input ? &dx : nullptr);
  if (d_input) *d_input = dx.col(0);
  return g;
}

// Convenience: gradient of output . upstream for a single input, running the
// forward pass internally.
template <typename Scalar>
MlpGrad<Scalar> mlp_gradient(const Mlp<Scalar>& net, const NoDeduce<Vector<Scalar>>& input,
                             const NoDeduce<Vector<Scalar>>& upstream,
                             Vector<Scalar>* d_input = nullptr) {
  MlpTrace<Scalar> trace;
  mlp_forward(net, input, &trace);
  if (upstream.size() != net.output_dim())
    throw ContractError("mlp_gradient: upstream dim mismatch");
  return mlp_backward(net, trace, upstream, d_input);
}

template <typename Scalar>
bool all_finite(const Mlp<Scalar>& net) {
  for (const auto& w : net.weights)
    if (!w.allFinite()) return false;
  for (const auto& b : net.biases)
    if (!b.allFinite()) return false;
  return true;
}

template <typename Scalar>
bool all_finite(const MlpGrad<Scalar>& g) {
  for (const auto& w : g.d_weights)
    if (!w.allFinite()) return false;
  for (const auto& b : g.d_biases)
    if (!b.allFinite()) return false;
  return true;
}

template <typename Scalar>
void accumulate(MlpGrad<Scalar>& into, const MlpGrad<Scalar>& from, Scalar scale = Scalar(1)) {
  for (std::size_t l = 0; l < into.d_weights.size(); ++l) {
    into.d_weights[l] += scale * from.d_weights[l];
    into.d_biases[l] += scale * from.d_biases[l];
  }
}

template <typename Scalar>
void scale(MlpGrad<Scalar>& g, Scalar s) {
  for (std::size_t l = 0; l < g.d_weights.size(); ++l) {
    g.d_weights[l] *= s;
    g.d_biases[l] *= s;
  }
}

template <typename Scalar>
Scalar squared_norm(const MlpGrad<Scalar>& g) {
  Scalar s = 0;
  for (std::size_t l = 0; l < g.d_weights.size(); ++l)
    s += g.d_weights[l].squaredNorm() + g.d_biases[l].squaredNorm();
  return s;
}

}  // namespace aced

#endif  // ACED_MATH_MLP_HPP_
