#ifndef ACED_MATH_GAUSSIAN_HPP_
#define ACED_MATH_GAUSSIAN_HPP_

#include <cmath>

#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

inline constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

// Log density of a diagonal Gaussian with the given mean and per-dimension
// log standard deviation.
template <typename Scalar>
Scalar gaussian_log_prob(const Vector<Scalar>& mean,
                         const NoDeduce<Vector<Scalar>>& log_std,
                         const NoDeduce<Vector<Scalar>>& action) {
  if (mean.size() != log_std.size() || mean.size() != action.size())
    throw ContractError("gaussian_log_prob: dimension mismatch");
  const auto z = (action - mean).array() / log_std.array().exp();
  return -Scalar(0.5) * z.square().sum() - log_std.sum() -
         Scalar(0.5) * Scalar(kLogTwoPi) * Scalar(mean.size());
}

// d log p / d mean = (a - mu) / sigma^2
template <typename Scalar>
Vector<Scalar> gaussian_log_prob_grad_mean(const Vector<Scalar>& mean,
                                           const NoDeduce<Vector<Scalar>>& log_std,
                                           const NoDeduce<Vector<Scalar>>& action) {
  return ((action - mean).array() / (Scalar(2) * log_std.array()).exp()).matrix();
}

// d log p / d log_std = ((a - mu)/sigma)^2 - 1, per dimension.
template <typename Scalar>
Vector<Scalar> gaussian_log_prob_grad_log_std(const Vector<Scalar>& mean,
                                              const NoDeduce<Vector<Scalar>>& log_std,
                                              const NoDeduce<Vector<Scalar>>& action) {
  const auto z = (action - mean).array() / log_std.array().exp();
  return (z.square() - Scalar(1)).matrix();
}

template <typename Scalar>
Scalar gaussian_entropy(const Vector<Scalar>& log_std) {
  return log_std.sum() + Scalar(0.5) * (Scalar(kLogTwoPi) + Scalar(1)) * Scalar(log_std.size());
}

template <typename Scalar>
Vector<Scalar> gaussian_sample(const Vector<Scalar>& mean,
                               const NoDeduce<Vector<Scalar>>& log_std,
                               Rng& rng) {
  if (mean.size() != log_std.size()) throw ContractError("gaussian_sample: dimension mismatch");
  Vector<Scalar> out(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i)
    out(i) = mean(i) + std::exp(double(log_std(i))) * normal(rng, 0.0, 1.0);
  return out;
}

}  // namespace aced

#endif  // ACED_MATH_GAUSSIAN_HPP_
