#ifndef ACED_ENV_ENV_HPP_
#define ACED_ENV_ENV_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

// Deterministic 2D vertical-plane manipulation tasks. A point gripper moves
// in the (x, z) plane over a table at z = 0; square blocks rest on the table
// or on each other, can be grasped, carried, released and pushed. Reward is
// binary: 1 exactly when every block is strictly within the success threshold
// of its goal, and the episode terminates on that step.

enum class TaskKind { pick_place, stack };

struct EnvSpec {
  TaskKind kind = TaskKind::pick_place;
  int num_blocks = 1;
  double success_threshold = 0.05;  // strict: dist < threshold
  int max_steps = 50;

  // Geometry. Block positions are base centers; a block occupies
  // [x - half_width, x + half_width] x [z, z + block_height].
  double workspace_x = 1.0;
  double workspace_z = 0.5;
  double block_height = 0.05;
  double block_half_width = 0.015;
  double grasp_radius = 0.03;
  double step_scale = 0.03;     // gripper displacement per unit action
  double aperture_rate = 0.5;   // aperture change per unit grip command

  // Reset distribution.
  double spawn_x_lo = 0.1, spawn_x_hi = 0.9;
  double air_goal_fraction = 0.5;            // pick-place only
  double air_goal_z_lo = 0.1, air_goal_z_hi = 0.4;
  double min_goal_distance = 0.1;            // resets never start solved
  double min_block_separation = 0.06;        // stack: initial block gap
  double home_x = 0.5, home_z = 0.4;

  static EnvSpec pick_place();
  static EnvSpec stack();
  static EnvSpec from_id(const std::string& id);

  // Versioned identifier; names the task and the observation layout.
  std::string id() const;
  int obs_dim() const { return 3 + 5 * num_blocks; }
  static constexpr int action_dim() { return 3; }
};

struct BlockState {
  Vector2d pos = Vector2d::Zero();  // base center (x, z)
  bool grasped = false;
};

struct EnvState {
  Vector2d gripper = Vector2d::Zero();
  double aperture = 1.0;  // 1 fully open, 0 fully closed
  std::vector<BlockState> blocks;
  std::vector<Vector2d> goals;  // one per block, fixed for the episode
  int timestep = 0;
};

struct EnvAction {
  double dx = 0.0;    // in [-1, 1]
  double dz = 0.0;    // in [-1, 1]
  double grip = 0.0;  // < 0 close / grasp, > 0 open / release
};

struct StepResult {
  EnvState state;
  double reward = 0.0;
  bool done = false;
};

// Fresh episode: blocks uniformly on the table, gripper at home, goal drawn
// from the task's goal distribution (pick-place: air_goal_fraction of goals in
// the air; stack: yellow goal exactly one block height above the green goal).
EnvState env_reset(const EnvSpec& spec, Rng& rng);

// Deterministic transition. Throws ContractError on non-finite action.
StepResult env_step(const EnvSpec& spec, const EnvState& state, const EnvAction& action);

// Pure success predicate, identical to the reward condition.
bool is_success(const EnvSpec& spec, const EnvState& state);

// Throws ContractError with a diagnostic if `state` violates any invariant
// (positions out of workspace, more than one grasped block, grasped block
// away from the gripper, floating non-grasped block, ...).
void check_state(const EnvSpec& spec, const EnvState& state);

// Support height a non-grasped block at `pos` would rest at, given the other
// blocks: the table (0) or the top of a non-grasped block it overlaps whose
// top is not above pos.z.
double support_height(const EnvSpec& spec, const EnvState& state, int block_index);

// Goal-conditioned observation vector, layout version 1 (see id()):
//   [0] gripper x            (workspace units)
//   [1] gripper z
//   [2] aperture             (0 closed .. 1 open)
//   for each block i:        3 + 3*i ...
//     [.] block x, [.] block z, [.] grasped flag (0 or 1)
//   for each block i:        3 + 3*num_blocks + 2*i ...
//     [.] goal x, [.] goal z
VectorXd observe(const EnvSpec& spec, const EnvState& state);

// Stateful wrapper owning the current episode state; one instance per rollout
// worker. Counts every env_step call for step accounting audits.
class Env {
 public:
  explicit Env(EnvSpec spec) : spec_(std::move(spec)) { state_.blocks.resize(spec_.num_blocks); }

  const EnvSpec& spec() const { return spec_; }
  const EnvState& state() const { return state_; }

  const EnvState& reset(Rng& rng) {
    state_ = env_reset(spec_, rng);
    return state_;
  }

  // Configures the environment exactly to `state` (validated); the timestep
  // counter restarts so the episode gets the full budget.
  void set_state(const EnvState& state) {
    check_state(spec_, state);
    state_ = state;
    state_.timestep = 0;
  }

  // Advances the episode; returns reward and done, retains the new state.
  StepResult step(const EnvAction& action) {
    StepResult r = env_step(spec_, state_, action);
    state_ = r.state;
    ++steps_taken_;
    return r;
  }

  std::uint64_t steps_taken() const { return steps_taken_; }

 private:
  EnvSpec spec_;
  EnvState state_;
  std::uint64_t steps_taken_ = 0;
};

}  // namespace aced

#endif  // ACED_ENV_ENV_HPP_
