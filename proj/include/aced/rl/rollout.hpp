#ifndef ACED_RL_ROLLOUT_HPP_
#define ACED_RL_ROLLOUT_HPP_

#include <cstdint>
#include <vector>

#include "aced/types.hpp"

namespace aced {

struct EpisodeSpan {
  int begin = 0;
  int length = 0;
  double episode_return = 0.0;
  bool success = false;
};

// Per-step experience for one training iteration, flattened over episodes
// (column i of the matrices is step i). Actions are the raw policy samples
// (before the environment clamps them) so importance ratios stay exact.
struct RolloutBatch {
  MatrixXd observations;  // obs_dim x N
  MatrixXd actions;       // act_dim x N
  VectorXd rewards;
  VectorXd values;
  VectorXd log_probs;
  std::vector<std::uint8_t> dones;
  std::vector<EpisodeSpan> episodes;

  int size() const { return static_cast<int>(rewards.size()); }
};

// Staging area filled one episode at a time, then assembled into a batch.
class RolloutCollector {
 public:
  RolloutCollector(int obs_dim, int act_dim) : obs_dim_(obs_dim), act_dim_(act_dim) {}

  void begin_episode() { episode_start_ = static_cast<int>(rewards_.size()); }

  void add_step(const VectorXd& obs, const VectorXd& action, double reward, bool done,
                double value, double log_prob) {
    if (obs.size() != obs_dim_ || action.size() != act_dim_)
      throw ContractError("RolloutCollector: dimension mismatch");
    obs_.push_back(obs);
    actions_.push_back(action);
    rewards_.push_back(reward);
    dones_.push_back(done ? 1 : 0);
    values_.push_back(value);
    log_probs_.push_back(log_prob);
  }

  void end_episode(double episode_return, bool success) {
    EpisodeSpan span;
    span.begin = episode_start_;
    span.length = static_cast<int>(rewards_.size()) - episode_start_;
    span.episode_return = episode_return;
    span.success = success;
    episodes_.push_back(span);
  }

  RolloutBatch assemble() const {
    RolloutBatch b;
    const int n = static_cast<int>(rewards_.size());
    b.observations.resize(obs_dim_, n);
    b.actions.resize(act_dim_, n);
    b.rewards.resize(n);
    b.values.resize(n);
    b.log_probs.resize(n);
    b.dones = dones_;
    b.episodes = episodes_;
    for (int i = 0; i < n; ++i) {
      b.observations.col(i) = obs_[i];
      b.actions.col(i) = actions_[i];
      b.rewards(i) = rewards_[i];
      b.values(i) = values_[i];
      b.log_probs(i) = log_probs_[i];
    }
    return b;
  }

  void clear() {
    obs_.clear();
    actions_.clear();
    rewards_.clear();
    dones_.clear();
    values_.clear();
    log_probs_.clear();
    episodes_.clear();
    episode_start_ = 0;
  }

  int steps() const { return static_cast<int>(rewards_.size()); }

 private:
  int obs_dim_, act_dim_;
  int episode_start_ = 0;
  std::vector<VectorXd> obs_, actions_;
  std::vector<double> rewards_, values_, log_probs_;
  std::vector<std::uint8_t> dones_;
  std::vector<EpisodeSpan> episodes_;
};

}  // namespace aced

#endif  // ACED_RL_ROLLOUT_HPP_
