#ifndef ACED_DEMO_DEMO_HPP_
#define ACED_DEMO_DEMO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aced/env/env.hpp"
#include "aced/rng.hpp"
#include "aced/types.hpp"

namespace aced {

// One episode: states s_0..s_T, optionally the aligned actions a_0..a_{T-1},
// per-step rewards and the success flag (true iff the final reward was 1).
struct Trajectory {
  std::vector<EnvState> states;
  std::vector<EnvAction> actions;  // empty for states-only trajectories
  std::vector<double> rewards;
  bool success = false;
  std::vector<Vector2d> goal;  // == states.front().goals

  bool has_actions() const { return !actions.empty(); }
  int length() const { return static_cast<int>(states.size()); }
};

struct DemoSet {
  std::vector<Trajectory> trajectories;
  std::string spec_id;
  std::uint64_t seed = 0;
  double p_success = 0.0;  // over the raw generation batch, before filtering
  double jitter = 0.0;

  int size() const { return static_cast<int>(trajectories.size()); }
};

// Deterministic open-loop phase policy: straight line to the next unplaced
// block, close within grasp radius, straight line to that block's goal,
// release within the success threshold. Blocks are handled in index order
// (stacking: green then yellow).
EnvAction expert_action(const EnvSpec& spec, const EnvState& state);

enum class KeepMode { successes_only, all };

// Rolls the scripted expert from fresh resets, adding +-jitter uniform noise
// per action component. p_success is computed over all `count` episodes;
// retention follows `keep`. Throws if successes_only filtering leaves no
// trajectories.
DemoSet generate_demos(const EnvSpec& spec, int count, Rng& rng,
                       KeepMode keep = KeepMode::successes_only, double jitter = 0.05);

// JSON Lines; first line is a header with version, spec id, seed and
// p_success, then one trajectory per line. The round trip is lossless.
void save_demos(const DemoSet& set, const std::filesystem::path& path);
DemoSet load_demos(const std::filesystem::path& path);

// First `count` trajectories as an independent set (metadata preserved).
DemoSet subsample_demos(const DemoSet& set, int count);

// True if every trajectory carries aligned actions (required by behavior
// cloning; the curriculum engine accepts states-only sets).
bool has_actions(const DemoSet& set);

}  // namespace aced

#endif  // ACED_DEMO_DEMO_HPP_
