#ifndef ACED_BASELINES_REVERSE_CURRICULUM_HPP_
#define ACED_BASELINES_REVERSE_CURRICULUM_HPP_

#include <vector>

#include "aced/env/env.hpp"
#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

struct ReverseCurriculumConfig {
  int pool_capacity = 1000;
  int brownian_horizon = 5;
  int append_old = 200;     // archived old starts appended at each refresh
  double band_lo = 0.1;     // success band for keeping a start as a seed
  double band_hi = 0.9;
  int refresh_period = 10;  // iterations between pool refreshes
  int initial_goal_states = 200;
};

// Brownian start-state expansion: a pool of candidate episode starts grown
// backward from goal states by short random-action rollouts. States solved
// at an intermediate rate stay as seeds for the next expansion.
class ReverseCurriculumState {
 public:
  ReverseCurriculumState(const EnvSpec& spec, const ReverseCurriculumConfig& cfg, Rng& rng);

  // Uniform draw from the pool; remembers the index so the episode outcome
  // can be attributed back to the start state.
  const EnvState& sample_start(Rng& rng, int* index) const;

  void note_episode(int index, bool success);

  // Selects band seeds from the accumulated tallies, re-expands the pool and
  // appends archived old starts; clears the tallies.
  void refresh(const EnvSpec& spec, Rng& rng);

  int pool_size() const { return static_cast<int>(pool_.size()); }
  std::size_t archive_size() const { return archive_.size(); }
  const std::vector<EnvState>& last_seeds() const { return seeds_; }
  const ReverseCurriculumConfig& config() const { return cfg_; }

 private:
  struct Entry {
    EnvState state;
    int rollouts = 0;
    int successes = 0;
  };

  ReverseCurriculumConfig cfg_;
  std::vector<Entry> pool_;
  std::vector<EnvState> archive_;
  std::vector<EnvState> seeds_;
};

// From each seed, applies `horizon` uniformly random actions and records
// every visited state; horizon 0 returns the seeds themselves.
std::vector<EnvState> brownian_expand(const EnvSpec& spec, const std::vector<EnvState>& seeds,
                                      int horizon, Rng& rng);

// Canonical success states used to initialize the pool: blocks placed at
// their goals (grasped at the gripper for air goals).
std::vector<EnvState> make_goal_states(const EnvSpec& spec, int count, Rng& rng);

}  // namespace aced

#endif  // ACED_BASELINES_REVERSE_CURRICULUM_HPP_
