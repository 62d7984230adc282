#ifndef ACED_RL_DDPG_HPP_
#define ACED_RL_DDPG_HPP_

#include <cstddef>
#include <vector>

#include "aced/math/adam.hpp"
#include "aced/math/mlp.hpp"
#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

struct DdpgConfig {
  double lr = 2e-4;
  double gamma = 0.99;
  int target_period = 5;  // hard target copies every N updates
  std::size_t replay_capacity = 200000;
  int batch_size = 128;
  double noise_std = 0.1;  // additive Gaussian exploration during rollouts
  int updates_per_episode = 1;
};

struct Transition {
  VectorXd obs;
  VectorXd action;
  double reward = 0.0;
  VectorXd next_obs;
  bool done = false;
};

// Fixed-capacity ring buffer with uniform sampling over occupied slots.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ContractError("ReplayBuffer: zero capacity");
  }

  void push(Transition t) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return data_[i]; }

  const Transition& sample(Rng& rng) const {
    if (data_.empty()) throw ContractError("ReplayBuffer: sample from empty buffer");
    return data_[uniform_int(rng, static_cast<int>(data_.size()))];
  }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> data_;
};

// Actor emits tanh-squashed actions; the critic scores (obs, action) pairs.
// Targets are hard copies refreshed every target_period updates.
struct DdpgAgent {
  Mlpd actor;
  Mlpd critic;
  Mlpd actor_target;
  Mlpd critic_target;
  AdamStated actor_optim;
  AdamStated critic_optim;
  long updates = 0;
};

DdpgAgent make_ddpg_agent(int obs_dim, int action_dim, const DdpgConfig& cfg, Rng& rng);

// Deterministic policy action (tanh of the actor output).
VectorXd ddpg_action(const DdpgAgent& agent, const VectorXd& obs);

// Critic targets y = r + gamma * (1 - done) * Q_target(s', actor_target(s'))
// for a sampled index set; exposed for oracle tests.
VectorXd ddpg_targets(const DdpgAgent& agent, const DdpgConfig& cfg,
                      const std::vector<const Transition*>& batch);

struct DdpgDiagnostics {
  double critic_loss = 0.0;
  double actor_objective = 0.0;  // mean Q(s, actor(s))
  bool skipped = false;          // buffer smaller than batch size
};

// One gradient step on critic and actor from a uniform replay sample, with a
// hard target copy every cfg.target_period updates.
DdpgDiagnostics ddpg_update(ReplayBuffer& buffer, DdpgAgent& agent, const DdpgConfig& cfg,
                            Rng& rng);

}  // namespace aced

#endif  // ACED_RL_DDPG_HPP_
