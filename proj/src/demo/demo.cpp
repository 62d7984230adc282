#include "aced/demo/demo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace aced {

namespace {

using nlohmann::json;

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Straight-line command toward `to`: unit-box normalized direction when far,
// exact landing when the remaining distance fits in one step.
void move_towards(const EnvSpec& spec, const Vector2d& from, const Vector2d& to, EnvAction* a) {
  const Vector2d d = to - from;
  const double m = std::max(std::abs(d.x()), std::abs(d.y()));
  if (m < 1e-12) {
    a->dx = a->dz = 0.0;
    return;
  }
  const double scale = (m > spec.step_scale) ? m : spec.step_scale;
  a->dx = d.x() / scale;
  a->dz = d.y() / scale;
}

}  // namespace

EnvAction expert_action(const EnvSpec& spec, const EnvState& state) {
  EnvAction a;

  int active = -1;
  for (std::size_t i = 0; i < state.blocks.size(); ++i) {
    const bool placed = !state.blocks[i].grasped &&
                        (state.blocks[i].pos - state.goals[i]).norm() < spec.success_threshold;
    if (!placed) {
      active = static_cast<int>(i);
      break;
    }
  }
  if (active < 0) return a;  // everything placed; episode should be over

  int held = -1;
  for (std::size_t i = 0; i < state.blocks.size(); ++i)
    if (state.blocks[i].grasped) held = static_cast<int>(i);

  if (held >= 0 && held != active) {
    a.grip = 1.0;  // holding the wrong block: drop it first
    return a;
  }

  const BlockState& b = state.blocks[active];
  if (b.grasped) {
    if ((b.pos - state.goals[active]).norm() < spec.success_threshold) {
      a.grip = 1.0;  // release at the goal
      return a;
    }
    move_towards(spec, state.gripper, state.goals[active], &a);
    a.grip = -1.0;  // keep hold while carrying
    return a;
  }
  if ((state.gripper - b.pos).norm() < spec.grasp_radius) {
    a.grip = -1.0;  // stop and close
    return a;
  }
  move_towards(spec, state.gripper, b.pos, &a);
  a.grip = 1.0;  // approach with the gripper open
  return a;
}

DemoSet generate_demos(const EnvSpec& spec, int count, Rng& rng, KeepMode keep, double jitter) {
  if (count < 1) throw ContractError("generate_demos: count must be >= 1");

  DemoSet set;
  set.spec_id = spec.id();
  set.jitter = jitter;
  int successes = 0;

  Env env(spec);
  for (int k = 0; k < count; ++k) {
    Trajectory traj;
    env.reset(rng);
    traj.states.push_back(env.state());
    traj.goal = env.state().goals;

    bool done = false;
    while (!done) {
      EnvAction a = expert_action(spec, env.state());
      a.dx = clampd(a.dx + uniform(rng, -jitter, jitter), -1.0, 1.0);
      a.dz = clampd(a.dz + uniform(rng, -jitter, jitter), -1.0, 1.0);
      a.grip = clampd(a.grip + uniform(rng, -jitter, jitter), -1.0, 1.0);
      const StepResult r = env.step(a);
      traj.actions.push_back(a);
      traj.rewards.push_back(r.reward);
      traj.states.push_back(r.state);
      done = r.done;
    }
    traj.success = traj.rewards.back() == 1.0;
    if (traj.success) ++successes;
    if (keep == KeepMode::all || traj.success) set.trajectories.push_back(std::move(traj));
  }

  set.p_success = static_cast<double>(successes) / count;
  if (set.trajectories.empty())
    throw std::runtime_error("generate_demos: no successful demonstrations in " +
                             std::to_string(count) + " attempts (successes-only mode)");
  return set;
}

namespace {

json state_to_json(const EnvState& s) {
  json j;
  j["g"] = {s.gripper.x(), s.gripper.y()};
  j["ap"] = s.aperture;
  json blocks = json::array();
  for (const auto& b : s.blocks) blocks.push_back({b.pos.x(), b.pos.y(), b.grasped ? 1 : 0});
  j["b"] = std::move(blocks);
  j["t"] = s.timestep;
  return j;
}

EnvState state_from_json(const json& j, const std::vector<Vector2d>& goals) {
  EnvState s;
  s.gripper = Vector2d(j.at("g").at(0).get<double>(), j.at("g").at(1).get<double>());
  s.aperture = j.at("ap").get<double>();
  for (const auto& b : j.at("b")) {
    BlockState bs;
    bs.pos = Vector2d(b.at(0).get<double>(), b.at(1).get<double>());
    bs.grasped = b.at(2).get<int>() != 0;
    s.blocks.push_back(bs);
  }
  s.goals = goals;
  s.timestep = j.at("t").get<int>();
  return s;
}

}  // namespace

void save_demos(const DemoSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_demos: cannot open " + path.string());

  json header;
  header["version"] = 1;
  header["kind"] = "demoset";
  header["spec_id"] = set.spec_id;
  header["seed"] = set.seed;
  header["p_success"] = set.p_success;
  header["jitter"] = set.jitter;
  out << header.dump() << "\n";

  for (const auto& traj : set.trajectories) {
    json j;
    json goal = json::array();
    for (const auto& g : traj.goal) goal.push_back({g.x(), g.y()});
    j["goal"] = std::move(goal);
    json states = json::array();
    for (const auto& s : traj.states) states.push_back(state_to_json(s));
    j["states"] = std::move(states);
    if (traj.has_actions()) {
      json actions = json::array();
      for (const auto& a : traj.actions) actions.push_back({a.dx, a.dz, a.grip});
      j["actions"] = std::move(actions);
    }
    j["rewards"] = traj.rewards;
    j["success"] = traj.success;
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("save_demos: write failed for " + path.string());
}

DemoSet load_demos(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_demos: cannot open " + path.string());

  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty demo file", 1);
  ++line_no;

  DemoSet set;
  try {
    const json header = json::parse(line);
    if (header.at("version").get<int>() != 1)
      throw ParseError("unsupported demo file version", line_no);
    if (header.at("kind").get<std::string>() != "demoset")
      throw ParseError("not a demo set file", line_no);
    set.spec_id = header.at("spec_id").get<std::string>();
    set.seed = header.at("seed").get<std::uint64_t>();
    set.p_success = header.at("p_success").get<double>();
    set.jitter = header.value("jitter", 0.0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad demo header: ") + e.what(), line_no);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Trajectory traj;
    try {
      const json j = json::parse(line);
      for (const auto& g : j.at("goal"))
        traj.goal.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
      for (const auto& s : j.at("states")) traj.states.push_back(state_from_json(s, traj.goal));
      if (j.contains("actions")) {
        for (const auto& a : j.at("actions")) {
          EnvAction act;
          act.dx = a.at(0).get<double>();
          act.dz = a.at(1).get<double>();
          act.grip = a.at(2).get<double>();
          traj.actions.push_back(act);
        }
      }
      traj.rewards = j.at("rewards").get<std::vector<double>>();
      traj.success = j.at("success").get<bool>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad trajectory: ") + e.what(), line_no);
    }

    if (traj.states.size() < 2) throw ParseError("trajectory shorter than 2 states", line_no);
    if (traj.has_actions() && traj.actions.size() + 1 != traj.states.size())
      throw ParseError("action count != state count - 1", line_no);
    if (traj.rewards.size() + 1 != traj.states.size())
      throw ParseError("reward count != state count - 1", line_no);
    if (traj.success != (traj.rewards.back() == 1.0))
      throw ParseError("success flag contradicts final reward", line_no);
    set.trajectories.push_back(std::move(traj));
  }
  return set;
}

DemoSet subsample_demos(const DemoSet& set, int count) {
  if (count < 1 || count > set.size())
    throw ContractError("subsample_demos: requested " + std::to_string(count) + " of " +
                        std::to_string(set.size()));
  DemoSet out = set;
  out.trajectories.assign(set.trajectories.begin(), set.trajectories.begin() + count);
  return out;
}

bool has_actions(const DemoSet& set) {
  return std::all_of(set.trajectories.begin(), set.trajectories.end(),
                     [](const Trajectory& t) { return t.has_actions(); });
}

}  // namespace aced
