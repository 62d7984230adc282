#ifndef ACED_RL_BC_HPP_
#define ACED_RL_BC_HPP_

#include <vector>

#include "aced/demo/demo.hpp"
#include "aced/rl/policy.hpp"
#include "aced/rng.hpp"

namespace aced {

struct BcConfig {
  int epochs = 200;
  double lr = 2e-4;
  int minibatch = 256;
  // Early stop once the epoch loss hasn't improved by min_delta for
  // `patience` consecutive epochs.
  int patience = 20;
  double min_delta = 1e-5;
};

struct BcReport {
  std::vector<double> epoch_losses;  // mean negative log-likelihood
  int epochs_run = 0;
};

// Supervised pretraining: minimizes the mean negative Gaussian log-likelihood
// of demonstrated actions under the policy by Adam. Only the mean net is
// trained; the log-std head stays at its initialization so the downstream RL
// phase keeps its exploration scale. Rejects states-only demo sets.
BcReport bc_pretrain(const DemoSet& demos, const EnvSpec& spec, GaussianPolicy& policy,
                     const BcConfig& cfg, Rng& rng);

}  // namespace aced

#endif  // ACED_RL_BC_HPP_
