#ifndef ACED_RL_PPO_HPP_
#define ACED_RL_PPO_HPP_

#include <optional>

#include "aced/math/adam.hpp"
#include "aced/rl/policy.hpp"
#include "aced/rl/rollout.hpp"
#include "aced/rng.hpp"

namespace aced {

struct PpoConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip_eps = 0.2;
  double lr = 2e-4;
  std::optional<double> grad_clip_norm;  // global-norm clip factor, off by default
  int epochs = 4;
  int minibatch = 256;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double log_std_min = -4.0;  // keeps the exploration head sane under long training
  double log_std_max = 2.0;
};

struct PpoOptimState {
  AdamStated policy_net;
  AdamVecStated log_std;
  AdamStated value_net;
};

PpoOptimState make_ppo_optim(const GaussianPolicy& policy, const Mlpd& value,
                             const PpoConfig& cfg);

// min(rho * A, clip(rho, 1-eps, 1+eps) * A): a lower bound on the unclipped
// surrogate for every sample.
double clipped_surrogate(double ratio, double advantage, double clip_eps);

struct PpoDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double entropy = 0.0;
  bool aborted = false;  // non-finite loss: the iteration was abandoned
};

// One PPO iteration: computes GAE over the batch (episodes all end done),
// normalizes advantages over the whole batch, then runs epochs x minibatches
// of clipped-surrogate ascent on the policy and value regression on the value
// net. Old log-probs come from the batch (stored at sampling time).
PpoDiagnostics ppo_update(const RolloutBatch& batch, GaussianPolicy& policy, Mlpd& value,
                          PpoOptimState& optim, const PpoConfig& cfg, Rng& rng);

}  // namespace aced

#endif  // ACED_RL_PPO_HPP_
