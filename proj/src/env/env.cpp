#include "aced/env/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aced {

namespace {

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

int grasped_index(const EnvState& s) {
  for (std::size_t i = 0; i < s.blocks.size(); ++i)
    if (s.blocks[i].grasped) return static_cast<int>(i);
  return -1;
}

}  // namespace

EnvSpec EnvSpec::pick_place() {
  EnvSpec s;
  s.kind = TaskKind::pick_place;
  s.num_blocks = 1;
  s.success_threshold = 0.05;
  s.max_steps = 50;
  return s;
}

EnvSpec EnvSpec::stack() {
  EnvSpec s;
  s.kind = TaskKind::stack;
  s.num_blocks = 2;
  s.success_threshold = 0.04;
  s.max_steps = 100;
  return s;
}

EnvSpec EnvSpec::from_id(const std::string& id) {
  if (id == EnvSpec::pick_place().id()) return EnvSpec::pick_place();
  if (id == EnvSpec::stack().id()) return EnvSpec::stack();
  throw ParseError("unknown environment spec id: " + id);
}

std::string EnvSpec::id() const {
  return kind == TaskKind::pick_place ? "pickplace-v1" : "stack-v1";
}

EnvState env_reset(const EnvSpec& spec, Rng& rng) {
  EnvState s;
  s.gripper = Vector2d(spec.home_x, spec.home_z);
  s.aperture = 1.0;
  s.timestep = 0;
  s.blocks.resize(spec.num_blocks);
  s.goals.resize(spec.num_blocks);

  // Blocks on the table, pairwise separated.
  for (int i = 0; i < spec.num_blocks; ++i) {
    for (;;) {
      const double x = uniform(rng, spec.spawn_x_lo, spec.spawn_x_hi);
      bool clear = true;
      for (int j = 0; j < i; ++j)
        if (std::abs(x - s.blocks[j].pos.x()) < spec.min_block_separation) clear = false;
      if (clear) {
        s.blocks[i].pos = Vector2d(x, 0.0);
        s.blocks[i].grasped = false;
        break;
      }
    }
  }

  if (spec.kind == TaskKind::pick_place) {
    // Choose table vs air first so the air fraction is exact, then resample
    // the position within the chosen class until the episode isn't already
    // solved at reset.
    const bool air = bernoulli(rng, spec.air_goal_fraction);
    for (;;) {
      const double gx = uniform(rng, spec.spawn_x_lo, spec.spawn_x_hi);
      const double gz = air ? uniform(rng, spec.air_goal_z_lo, spec.air_goal_z_hi) : 0.0;
      const Vector2d goal(gx, gz);
      if ((goal - s.blocks[0].pos).norm() >= spec.min_goal_distance) {
        s.goals[0] = goal;
        break;
      }
    }
  } else {
    // Green (block 0) goal on the table; yellow (block 1) goal exactly one
    // block height above it.
    for (;;) {
      const double gx = uniform(rng, spec.spawn_x_lo, spec.spawn_x_hi);
      const Vector2d g0(gx, 0.0);
      const Vector2d g1(gx, spec.block_height);
      if ((g0 - s.blocks[0].pos).norm() >= spec.min_goal_distance &&
          (g1 - s.blocks[1].pos).norm() >= spec.min_goal_distance) {
        s.goals[0] = g0;
        s.goals[1] = g1;
        break;
      }
    }
  }
  return s;
}

bool is_success(const EnvSpec& spec, const EnvState& state) {
  for (std::size_t i = 0; i < state.blocks.size(); ++i)
    if ((state.blocks[i].pos - state.goals[i]).norm() >= spec.success_threshold) return false;
  return true;
}

double support_height(const EnvSpec& spec, const EnvState& state, int block_index) {
  const BlockState& b = state.blocks[block_index];
  double support = 0.0;
  for (std::size_t j = 0; j < state.blocks.size(); ++j) {
    if (static_cast<int>(j) == block_index || state.blocks[j].grasped) continue;
    const BlockState& other = state.blocks[j];
    const double top = other.pos.y() + spec.block_height;
    if (std::abs(other.pos.x() - b.pos.x()) <= spec.block_half_width &&
        top <= b.pos.y() + 1e-12) {
      support = std::max(support, top);
    }
  }
  return support;
}

StepResult env_step(const EnvSpec& spec, const EnvState& state, const EnvAction& action) {
  if (!std::isfinite(action.dx) || !std::isfinite(action.dz) || !std::isfinite(action.grip))
    throw ContractError("env_step: non-finite action");

  const double dx = clampd(action.dx, -1.0, 1.0);
  const double dz = clampd(action.dz, -1.0, 1.0);
  const double grip = clampd(action.grip, -1.0, 1.0);

  EnvState ns = state;
  const Vector2d old_gripper = state.gripper;
  ns.gripper.x() = clampd(old_gripper.x() + spec.step_scale * dx, 0.0, spec.workspace_x);
  ns.gripper.y() = clampd(old_gripper.y() + spec.step_scale * dz, 0.0, spec.workspace_z);
  ns.aperture = clampd(ns.aperture + spec.aperture_rate * grip, 0.0, 1.0);

  int held = grasped_index(ns);
  if (grip < 0.0 && held < 0) {
    // Engage the nearest block within grasp radius, if any.
    int best = -1;
    double best_dist = spec.grasp_radius;
    for (std::size_t i = 0; i < ns.blocks.size(); ++i) {
      const double d = (ns.blocks[i].pos - ns.gripper).norm();
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      ns.blocks[best].grasped = true;
      held = best;
    }
  } else if (grip > 0.0 && held >= 0) {
    ns.blocks[held].grasped = false;  // settles below
    held = -1;
  }

  if (held >= 0) ns.blocks[held].pos = ns.gripper;

  // A gripper intruding into a table block's body shoves it aside.
  for (std::size_t i = 0; i < ns.blocks.size(); ++i) {
    BlockState& b = ns.blocks[i];
    if (b.grasped || b.pos.y() != 0.0) continue;
    if (std::abs(ns.gripper.x() - b.pos.x()) < spec.block_half_width &&
        ns.gripper.y() < spec.block_height) {
      double dir = b.pos.x() - ns.gripper.x();
      if (dir == 0.0) dir = ns.gripper.x() - old_gripper.x();
      if (dir == 0.0) dir = 1.0;
      b.pos.x() = clampd(ns.gripper.x() + (dir > 0.0 ? 1.0 : -1.0) * spec.block_half_width, 0.0,
                         spec.workspace_x);
    }
  }

  // Non-grasped blocks settle to their support, lowest first so stacks
  // re-settle bottom-up.
  std::vector<int> order(ns.blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ns.blocks[a].pos.y() < ns.blocks[b].pos.y(); });
  for (int i : order) {
    if (ns.blocks[i].grasped) continue;
    ns.blocks[i].pos.y() = support_height(spec, ns, i);
  }

  ns.timestep = state.timestep + 1;
  StepResult out;
  out.reward = is_success(spec, ns) ? 1.0 : 0.0;
  out.done = out.reward == 1.0 || ns.timestep >= spec.max_steps;
  out.state = std::move(ns);
  return out;
}

void check_state(const EnvSpec& spec, const EnvState& state) {
  const auto fail = [](const std::string& why) {
    throw ContractError("invalid environment state: " + why);
  };

  if (static_cast<int>(state.blocks.size()) != spec.num_blocks)
    fail("expected " + std::to_string(spec.num_blocks) + " blocks, got " +
         std::to_string(state.blocks.size()));
  if (state.goals.size() != state.blocks.size()) fail("goal count != block count");
  if (!state.gripper.allFinite() || !std::isfinite(state.aperture)) fail("non-finite fields");
  if (state.gripper.x() < 0.0 || state.gripper.x() > spec.workspace_x ||
      state.gripper.y() < 0.0 || state.gripper.y() > spec.workspace_z)
    fail("gripper outside workspace");
  if (state.aperture < 0.0 || state.aperture > 1.0) fail("aperture outside [0, 1]");
  if (state.timestep < 0) fail("negative timestep");

  int grasped_count = 0;
  for (std::size_t i = 0; i < state.blocks.size(); ++i) {
    const BlockState& b = state.blocks[i];
    if (!b.pos.allFinite() || !state.goals[i].allFinite())
      fail("non-finite block or goal position");
    if (b.pos.x() < 0.0 || b.pos.x() > spec.workspace_x || b.pos.y() < 0.0 ||
        b.pos.y() > spec.workspace_z)
      fail("block " + std::to_string(i) + " outside workspace");
    if (b.grasped) {
      ++grasped_count;
      if ((b.pos - state.gripper).norm() > 1e-9)
        fail("grasped block " + std::to_string(i) + " not at gripper");
    } else {
      const double support = support_height(spec, state, static_cast<int>(i));
      if (std::abs(b.pos.y() - support) > 1e-9)
        fail("block " + std::to_string(i) + " floating at z=" + std::to_string(b.pos.y()) +
             ", support=" + std::to_string(support));
    }
  }
  if (grasped_count > 1) fail("more than one grasped block");
}

VectorXd observe(const EnvSpec& spec, const EnvState& state) {
  VectorXd obs(spec.obs_dim());
  obs(0) = state.gripper.x();
  obs(1) = state.gripper.y();
  obs(2) = state.aperture;
  for (int i = 0; i < spec.num_blocks; ++i) {
    obs(3 + 3 * i) = state.blocks[i].pos.x();
    obs(4 + 3 * i) = state.blocks[i].pos.y();
    obs(5 + 3 * i) = state.blocks[i].grasped ? 1.0 : 0.0;
  }
  const int goal_base = 3 + 3 * spec.num_blocks;
  for (int i = 0; i < spec.num_blocks; ++i) {
    obs(goal_base + 2 * i) = state.goals[i].x();
    obs(goal_base + 2 * i + 1) = state.goals[i].y();
  }
  return obs;
}

}  // namespace aced
