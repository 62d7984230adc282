#include "aced/baselines/reverse_curriculum.hpp"

#include <algorithm>

namespace aced {

std::vector<EnvState> brownian_expand(const EnvSpec& spec, const std::vector<EnvState>& seeds,
                                      int horizon, Rng& rng) {
  if (horizon < 0) throw ContractError("brownian_expand: negative horizon");
  if (horizon == 0) return seeds;

  std::vector<EnvState> out;
  out.reserve(seeds.size() * horizon);
  Env env(spec);
  for (const EnvState& seed : seeds) {
    env.set_state(seed);
    for (int k = 0; k < horizon; ++k) {
      EnvAction a;
      a.dx = uniform(rng, -1.0, 1.0);
      a.dz = uniform(rng, -1.0, 1.0);
      a.grip = uniform(rng, -1.0, 1.0);
      const StepResult r = env.step(a);
      EnvState s = r.state;
      s.timestep = 0;  // candidates start fresh episodes
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<EnvState> make_goal_states(const EnvSpec& spec, int count, Rng& rng) {
  std::vector<EnvState> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    EnvState s = env_reset(spec, rng);
    if (spec.kind == TaskKind::pick_place) {
      const Vector2d goal = s.goals[0];
      if (goal.y() > 0.0) {
        // Air goal: only reachable held in the gripper.
        s.gripper = goal;
        s.aperture = 0.0;
        s.blocks[0].pos = goal;
        s.blocks[0].grasped = true;
      } else {
        s.blocks[0].pos = goal;
        s.blocks[0].grasped = false;
      }
    } else {
      // Stacked configuration resting at the goal column.
      s.blocks[0].pos = s.goals[0];
      s.blocks[0].grasped = false;
      s.blocks[1].pos = s.goals[1];
      s.blocks[1].grasped = false;
      s.gripper = Vector2d(s.goals[1].x(), std::min(s.goals[1].y() + 0.1, spec.workspace_z));
      s.aperture = 1.0;
    }
    s.timestep = 0;
    check_state(spec, s);
    out.push_back(std::move(s));
  }
  return out;
}

ReverseCurriculumState::ReverseCurriculumState(const EnvSpec& spec,
                                               const ReverseCurriculumConfig& cfg, Rng& rng)
    : cfg_(cfg) {
  seeds_ = make_goal_states(spec, cfg.initial_goal_states, rng);
  std::vector<EnvState> candidates;
  while (static_cast<int>(candidates.size()) < cfg_.pool_capacity) {
    std::vector<EnvState> grown = brownian_expand(spec, seeds_, cfg_.brownian_horizon, rng);
    candidates.insert(candidates.end(), grown.begin(), grown.end());
    if (grown.empty()) break;
  }
  candidates.resize(std::min<std::size_t>(candidates.size(), cfg_.pool_capacity));
  for (EnvState& s : candidates) pool_.push_back(Entry{std::move(s), 0, 0});
}

const EnvState& ReverseCurriculumState::sample_start(Rng& rng, int* index) const {
  if (pool_.empty()) throw ContractError("reverse curriculum: empty start-state pool");
  const int i = uniform_int(rng, static_cast<int>(pool_.size()));
  if (index) *index = i;
  return pool_[i].state;
}

void ReverseCurriculumState::note_episode(int index, bool success) {
  if (index < 0 || index >= static_cast<int>(pool_.size()))
    throw ContractError("reverse curriculum: episode index out of range");
  ++pool_[index].rollouts;
  if (success) ++pool_[index].successes;
}

void ReverseCurriculumState::refresh(const EnvSpec& spec, Rng& rng) {
  std::vector<EnvState> band;
  for (const Entry& e : pool_) {
    if (e.rollouts == 0) continue;
    const double rate = static_cast<double>(e.successes) / e.rollouts;
    if (rate >= cfg_.band_lo && rate <= cfg_.band_hi) band.push_back(e.state);
  }
  if (!band.empty()) seeds_ = std::move(band);
  // else: keep the previous seeds; an all-easy or all-hard pool re-expands
  // from where it last stood.

  for (Entry& e : pool_) archive_.push_back(std::move(e.state));
  pool_.clear();

  const int n_old = std::min<int>(cfg_.append_old, static_cast<int>(archive_.size()));
  const int n_new = cfg_.pool_capacity - n_old;

  std::vector<EnvState> fresh;
  while (static_cast<int>(fresh.size()) < n_new) {
    std::vector<EnvState> grown = brownian_expand(spec, seeds_, cfg_.brownian_horizon, rng);
    if (grown.empty()) break;
    fresh.insert(fresh.end(), grown.begin(), grown.end());
  }
  fresh.resize(std::min<std::size_t>(fresh.size(), n_new));
  for (EnvState& s : fresh) pool_.push_back(Entry{std::move(s), 0, 0});
  for (int k = 0; k < n_old; ++k) {
    const int i = uniform_int(rng, static_cast<int>(archive_.size()));
    pool_.push_back(Entry{archive_[i], 0, 0});
  }
}

}  // namespace aced
