#ifndef ACED_RL_POLICY_HPP_
#define ACED_RL_POLICY_HPP_

#include <cmath>
#include <vector>

#include "aced/math/gaussian.hpp"
#include "aced/math/mlp.hpp"
#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

inline const std::vector<int> kHiddenSizes = {128, 64, 32};

// Diagonal-Gaussian policy: MLP mean plus a state-independent learnable
// log-std vector.
struct GaussianPolicy {
  Mlpd net;
  VectorXd log_std;

  Eigen::Index obs_dim() const { return net.input_dim(); }
  Eigen::Index action_dim() const { return net.output_dim(); }

  VectorXd mean(const VectorXd& obs) const { return mlp_forward(net, obs); }

  VectorXd sample(const VectorXd& obs, Rng& rng, double* log_prob = nullptr) const {
    const VectorXd mu = mean(obs);
    const VectorXd a = gaussian_sample(mu, log_std, rng);
    if (log_prob) *log_prob = gaussian_log_prob(mu, log_std, a);
    return a;
  }

  double log_prob(const VectorXd& obs, const VectorXd& action) const {
    return gaussian_log_prob(mean(obs), log_std, action);
  }
};

inline GaussianPolicy make_gaussian_policy(int obs_dim, int action_dim, Rng& rng,
                                           double initial_std = 0.5) {
  std::vector<int> dims;
  dims.push_back(obs_dim);
  dims.insert(dims.end(), kHiddenSizes.begin(), kHiddenSizes.end());
  dims.push_back(action_dim);
  GaussianPolicy p;
  p.net = make_mlp<double>(dims, rng, 0.01);
  p.log_std = VectorXd::Constant(action_dim, std::log(initial_std));
  return p;
}

// State-value net: same hidden sizes, scalar linear output.
inline Mlpd make_value_net(int obs_dim, Rng& rng) {
  std::vector<int> dims;
  dims.push_back(obs_dim);
  dims.insert(dims.end(), kHiddenSizes.begin(), kHiddenSizes.end());
  dims.push_back(1);
  return make_mlp<double>(dims, rng, 0.01);
}

}  // namespace aced

#endif  // ACED_RL_POLICY_HPP_
