#include "aced/curriculum/curriculum.hpp"

#include <cmath>
#include <numeric>

namespace aced {

int section_index(int demo_length, int c_max, int c, Rng& rng) {
  if (c_max < 1) throw ContractError("section_index: c_max must be >= 1");
  if (c < 1 || c > c_max) throw ContractError("section_index: c outside [1, c_max]");
  if (demo_length < 2) throw ContractError("section_index: demo_length must be >= 2");

  const int num_transitions = demo_length - 1;
  const int interval = num_transitions / c_max;
  if (interval == 0)
    throw ContractError("section_index: demo with " + std::to_string(demo_length) +
                        " states cannot be divided into " + std::to_string(c_max) + " sections");
  return uniform_int(rng, interval) + interval * (c_max - c);
}

EnvState curriculum_reset(const DemoSet& demos, const CurriculumState& cs, Rng& rng) {
  if (cs.mode != WorkerMode::curriculum)
    throw ContractError("curriculum_reset: worker is in normal mode");
  if (demos.trajectories.empty()) throw ContractError("curriculum_reset: empty demo set");

  const int which = uniform_int(rng, demos.size());
  const Trajectory& traj = demos.trajectories[which];
  int index;
  try {
    index = section_index(traj.length(), cs.c_max, cs.curriculum, rng);
  } catch (const ContractError& e) {
    throw ContractError(std::string(e.what()) + " (demo " + std::to_string(which) + ")");
  }
  return traj.states[index];
}

bool record_episode_and_maybe_advance(CurriculumState& cs, const AdvanceRule& rule,
                                      double episode_return) {
  if (!std::isfinite(episode_return))
    throw ContractError("record_episode_and_maybe_advance: non-finite return");
  if (cs.mode == WorkerMode::normal) return false;

  cs.window.push_back(episode_return);
  while (static_cast<int>(cs.window.size()) > rule.window_size) cs.window.pop_front();

  if (++cs.iterations_since_check < rule.check_period) return false;
  cs.iterations_since_check = 0;
  if (cs.window.empty()) return false;

  const double mean =
      std::accumulate(cs.window.begin(), cs.window.end(), 0.0) / cs.window.size();
  if (mean < rule.threshold) return false;

  if (cs.curriculum < cs.c_max) {
    ++cs.curriculum;
  } else {
    cs.mode = WorkerMode::normal;
  }
  return true;
}

void force_normal(CurriculumState& cs) { cs.mode = WorkerMode::normal; }

void validate_demos_for_sectioning(const DemoSet& demos, int c_max) {
  if (c_max < 1) throw ContractError("validate_demos_for_sectioning: c_max must be >= 1");
  for (int i = 0; i < demos.size(); ++i) {
    const int len = demos.trajectories[i].length();
    if (len < c_max + 1)
      throw ContractError("demo " + std::to_string(i) + " has " + std::to_string(len) +
                          " states; need at least " + std::to_string(c_max + 1) +
                          " for c_max=" + std::to_string(c_max));
  }
}

}  // namespace aced
