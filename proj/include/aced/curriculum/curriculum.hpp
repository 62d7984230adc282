#ifndef ACED_CURRICULUM_CURRICULUM_HPP_
#define ACED_CURRICULUM_CURRICULUM_HPP_

#include <deque>

#include "aced/demo/demo.hpp"
#include "aced/env/env.hpp"
#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

enum class WorkerMode { curriculum, normal };

// Per-worker curriculum number and advancement bookkeeping. The curriculum
// counts sections from the trajectory end: C=1 resets near the goal,
// C=C_max near the demo start. C never decreases and the mode only ever
// moves curriculum -> normal.
struct CurriculumState {
  int curriculum = 1;  // C
  int c_max = 1;
  WorkerMode mode = WorkerMode::curriculum;
  std::deque<double> window;         // most recent episode returns
  int iterations_since_check = 0;
};

struct AdvanceRule {
  double threshold = 0.9;  // phi
  int check_period = 120;  // t, in per-worker iterations
  int window_size = 3;     // n episodes
};

// State index for a reset within section C of a demo with `demo_length`
// states, uniform over the section. The final (goal) state is never
// returned: with interval = floor((demo_length - 1) / c_max), the result is
// uniform in [interval * (c_max - c), interval * (c_max - c + 1)).
// Throws ContractError when the demo is too short (interval == 0).
int section_index(int demo_length, int c_max, int c, Rng& rng);

// Uniformly random demo, then a section_index state from it. The caller
// feeds the returned state to Env::set_state.
EnvState curriculum_reset(const DemoSet& demos, const CurriculumState& cs, Rng& rng);

// Records one finished episode's return and, every `check_period` calls,
// compares the mean of the last `window_size` returns against the threshold:
// on success C increases, or the worker switches to normal mode once C has
// reached C_max. Returns true if the state changed.
bool record_episode_and_maybe_advance(CurriculumState& cs, const AdvanceRule& rule,
                                      double episode_return);

// Forces the curriculum -> normal transition (used by the two-phase stacking
// schedule); a no-op for workers already in normal mode.
void force_normal(CurriculumState& cs);

// Validates a demo set against a section count: every trajectory must have
// at least c_max + 1 states so each section holds at least one state.
// Throws ContractError naming the first offending trajectory.
void validate_demos_for_sectioning(const DemoSet& demos, int c_max);

}  // namespace aced

#endif  // ACED_CURRICULUM_CURRICULUM_HPP_
