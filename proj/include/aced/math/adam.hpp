#ifndef ACED_MATH_ADAM_HPP_
#define ACED_MATH_ADAM_HPP_

#include <cmath>
#include <optional>

#include "aced/math/mlp.hpp"
#include "aced/types.hpp"

namespace aced {

// Adam state for an Mlp parameter pack. Moment arrays mirror the net's
// shapes. clip_norm, when set, rescales the incoming gradient to that global
// norm before the moment updates.
template <typename Scalar>
struct AdamState {
  MlpGrad<Scalar> m;
  MlpGrad<Scalar> v;
  long step = 0;
  Scalar lr = Scalar(2e-4);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
  std::optional<Scalar> clip_norm;
};

// Adam state for a bare parameter vector (e.g. a policy's log-std head).
template <typename Scalar>
struct AdamVecState {
  Vector<Scalar> m;
  Vector<Scalar> v;
  long step = 0;
  Scalar lr = Scalar(2e-4);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
  std::optional<Scalar> clip_norm;
};

using AdamStated = AdamState<double>;
using AdamVecStated = AdamVecState<double>;

template <typename Scalar>
AdamState<Scalar> make_adam(const Mlp<Scalar>& net, Scalar lr,
                            std::optional<Scalar> clip_norm = std::nullopt) {
  AdamState<Scalar> s;
  s.m = zero_grad_like(net);
  s.v = zero_grad_like(net);
  s.lr = lr;
  s.clip_norm = clip_norm;
  return s;
}

template <typename Scalar>
AdamVecState<Scalar> make_adam_vec(Eigen::Index size, Scalar lr,
                                   std::optional<Scalar> clip_norm = std::nullopt) {
  AdamVecState<Scalar> s;
  s.m = Vector<Scalar>::Zero(size);
  s.v = Vector<Scalar>::Zero(size);
  s.lr = lr;
  s.clip_norm = clip_norm;
  return s;
}

namespace detail {

template <typename Scalar, typename Array>
void adam_update_array(Array& param, Array& m, Array& v, const Array& g, long step, Scalar lr,
                       Scalar beta1, Scalar beta2, Scalar eps) {
  m = beta1 * m + (Scalar(1) - beta1) * g;
  v = (beta2 * v.array() + (Scalar(1) - beta2) * g.array().square()).matrix();
  const Scalar bc1 = Scalar(1) - std::pow(beta1, Scalar(step));
  const Scalar bc2 = Scalar(1) - std::pow(beta2, Scalar(step));
  param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace detail

// One Adam step with bias correction. Shapes must match the state; non-finite
// gradients are rejected without touching parameters or moments.
template <typename Scalar>
void adam_step(AdamState<Scalar>& state, Mlp<Scalar>& net, const MlpGrad<Scalar>& grads) {
  if (state.m.d_weights.size() != net.weights.size() ||
      grads.d_weights.size() != net.weights.size())
    throw ContractError("adam_step: shape mismatch between state, params and grads");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (grads.d_weights[l].rows() != net.weights[l].rows() ||
        grads.d_weights[l].cols() != net.weights[l].cols() ||
        grads.d_biases[l].size() != net.biases[l].size())
      throw ContractError("adam_step: gradient shape mismatch at layer " + std::to_string(l));
  }
  if (!all_finite(grads)) throw ContractError("adam_step: non-finite gradient rejected");

  Scalar clip_scale = Scalar(1);
  if (state.clip_norm) {
    const Scalar norm = std::sqrt(squared_norm(grads));
    if (norm > *state.clip_norm && norm > Scalar(0)) clip_scale = *state.clip_norm / norm;
  }

  ++state.step;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Matrix<Scalar> gw = grads.d_weights[l] * clip_scale;
    Vector<Scalar> gb = grads.d_biases[l] * clip_scale;
    detail::adam_update_array<Scalar, Matrix<Scalar>>(net.weights[l], state.m.d_weights[l],
                                                      state.v.d_weights[l], gw, state.step,
                                                      state.lr, state.beta1, state.beta2,
                                                      state.eps);
    detail::adam_update_array<Scalar, Vector<Scalar>>(net.biases[l], state.m.d_biases[l],
                                                      state.v.d_biases[l], gb, state.step,
                                                      state.lr, state.beta1, state.beta2,
                                                      state.eps);
  }
}

template <typename Scalar>
void adam_step(AdamVecState<Scalar>& state, Vector<Scalar>& param, const Vector<Scalar>& grad) {
  if (param.size() != state.m.size() || grad.size() != param.size())
    throw ContractError("adam_step: vector shape mismatch");
  if (!grad.allFinite()) throw ContractError("adam_step: non-finite gradient rejected");

  Vector<Scalar> g = grad;
  if (state.clip_norm) {
    const Scalar norm = g.norm();
    if (norm > *state.clip_norm && norm > Scalar(0)) g *= *state.clip_norm / norm;
  }
  ++state.step;
  detail::adam_update_array<Scalar, Vector<Scalar>>(param, state.m, state.v, g, state.step,
                                                    state.lr, state.beta1, state.beta2, state.eps);
}

}  // namespace aced

#endif  // ACED_MATH_ADAM_HPP_
