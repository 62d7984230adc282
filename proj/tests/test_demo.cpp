#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aced/curriculum/curriculum.hpp"
#include "aced/demo/demo.hpp"
#include "aced/rl/bc.hpp"
#include "aced/rl/policy.hpp"

using namespace aced;

namespace {

bool states_bitwise_equal(const EnvState& a, const EnvState& b) {
  if (a.gripper != b.gripper || a.aperture != b.aperture || a.timestep != b.timestep)
    return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].pos != b.blocks[i].pos || a.blocks[i].grasped != b.blocks[i].grasped)
      return false;
    if (a.goals[i] != b.goals[i]) return false;
  }
  return true;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("expert: approach direction is the unit-box normalized straight line") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1);
  EnvState s = env_reset(spec, rng);
  s.gripper = Vector2d(0.0, 0.2);
  s.blocks[0].pos = Vector2d(0.3, 0.0);
  s.blocks[0].grasped = false;
  s.goals[0] = Vector2d(0.9, 0.3);
  const EnvAction a = expert_action(spec, s);
  CHECK(a.dx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.dz == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(a.grip > 0.0);  // open on approach
}

TEST_CASE("expert: within grasp radius it stops and closes") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(2);
  EnvState s = env_reset(spec, rng);
  s.blocks[0].pos = Vector2d(0.5, 0.0);
  s.gripper = Vector2d(0.52, 0.0);
  const EnvAction a = expert_action(spec, s);
  CHECK(a.dx == 0.0);
  CHECK(a.dz == 0.0);
  CHECK(a.grip < 0.0);
}

TEST_CASE("expert: grasped block within threshold of its goal is released") {
  const EnvSpec spec = EnvSpec::stack();
  Rng rng = make_rng(3);
  EnvState s = env_reset(spec, rng);
  s.gripper = s.goals[0] + Vector2d(0.01, 0.01);
  s.blocks[0].pos = s.gripper;
  s.blocks[0].grasped = true;
  s.blocks[1].pos = Vector2d(s.goals[0].x() > 0.5 ? 0.1 : 0.9, 0.0);
  s.blocks[1].grasped = false;
  const EnvAction a = expert_action(spec, s);
  CHECK(a.grip > 0.0);
  CHECK(a.dx == 0.0);
  CHECK(a.dz == 0.0);
}

TEST_CASE("expert demos: pick-place success rate at least 0.9") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1001);
  const DemoSet set = generate_demos(spec, 100, rng, KeepMode::all);
  CHECK(set.p_success >= 0.9);
  CHECK(set.size() == 100);
}

TEST_CASE("expert demos: stacking success rate noticeably below pick-place") {
  const EnvSpec pick = EnvSpec::pick_place();
  const EnvSpec stack = EnvSpec::stack();
  Rng rng1 = make_rng(1002), rng2 = make_rng(1002);
  const DemoSet p = generate_demos(pick, 100, rng1, KeepMode::all);
  const DemoSet s = generate_demos(stack, 100, rng2, KeepMode::all);
  CHECK(s.p_success < p.p_success);
  CHECK(s.p_success >= 0.5);  // obstruction failures, not a broken expert
}

TEST_CASE("expert demos: successes-only keeps only successful trajectories") {
  const EnvSpec spec = EnvSpec::stack();
  Rng rng = make_rng(1003);
  const DemoSet set = generate_demos(spec, 60, rng, KeepMode::successes_only);
  for (const Trajectory& t : set.trajectories) {
    CHECK(t.success);
    CHECK(t.rewards.back() == 1.0);
    CHECK(is_success(spec, t.states.back()));
  }
  CHECK(set.size() <= 60);
}

TEST_CASE("expert demos: demo length never exceeds max steps + 1 states") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1004);
  const DemoSet set = generate_demos(spec, 50, rng, KeepMode::all);
  for (const Trajectory& t : set.trajectories) {
    CHECK(t.length() >= 2);
    CHECK(t.length() <= spec.max_steps + 1);
    CHECK(t.actions.size() == t.states.size() - 1);
    CHECK(t.rewards.size() == t.states.size() - 1);
  }
}

TEST_CASE("expert demos: zero successes in successes-only mode is an explicit failure") {
  EnvSpec spec = EnvSpec::pick_place();
  spec.max_steps = 1;  // nothing can be solved in one step
  Rng rng = make_rng(1005);
  CHECK_THROWS_AS(generate_demos(spec, 10, rng, KeepMode::successes_only), std::runtime_error);
}

TEST_CASE("demo replay: stored actions reproduce stored states exactly") {
  const EnvSpec spec = EnvSpec::stack();
  Rng rng = make_rng(1006);
  const DemoSet set = generate_demos(spec, 20, rng);
  Env env(spec);
  for (const Trajectory& t : set.trajectories) {
    env.set_state(t.states.front());
    for (std::size_t k = 0; k < t.actions.size(); ++k) {
      const StepResult r = env.step(t.actions[k]);
      CHECK(states_bitwise_equal(r.state, t.states[k + 1]));
      CHECK(r.reward == t.rewards[k]);
    }
  }
}

TEST_CASE("demo replay oracle: the expert finishes from a late-section reset") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1007);
  const DemoSet set = generate_demos(spec, 10, rng);
  Env env(spec);
  for (const Trajectory& t : set.trajectories) {
    // a state from the final fifth of the demo, as a C=1 reset would pick
    const int index = section_index(t.length(), 5, 1, rng);
    env.set_state(t.states[index]);
    const int remaining = t.length() - 1 - index;
    bool solved = false;
    for (int k = 0; k < remaining + 12 && !solved; ++k) {
      const StepResult r = env.step(expert_action(spec, env.state()));
      solved = r.reward == 1.0;
    }
    CHECK(solved);
  }
}

TEST_CASE("demo persistence: save/load round trip is lossless") {
  const EnvSpec spec = EnvSpec::stack();
  Rng rng = make_rng(1008);
  DemoSet set = generate_demos(spec, 15, rng);
  set.seed = 1008;
  const auto path = temp_file("aced_demo_roundtrip.jsonl");
  save_demos(set, path);
  const DemoSet back = load_demos(path);

  CHECK(back.spec_id == set.spec_id);
  CHECK(back.seed == set.seed);
  CHECK(back.p_success == set.p_success);
  REQUIRE(back.size() == set.size());
  for (int d = 0; d < set.size(); ++d) {
    const Trajectory& a = set.trajectories[d];
    const Trajectory& b = back.trajectories[d];
    REQUIRE(a.length() == b.length());
    CHECK(a.success == b.success);
    for (int k = 0; k < a.length(); ++k) CHECK(states_bitwise_equal(a.states[k], b.states[k]));
    for (std::size_t k = 0; k < a.actions.size(); ++k) {
      CHECK(a.actions[k].dx == b.actions[k].dx);
      CHECK(a.actions[k].dz == b.actions[k].dz);
      CHECK(a.actions[k].grip == b.actions[k].grip);
    }
    CHECK(a.rewards == b.rewards);
  }
  std::filesystem::remove(path);
}

TEST_CASE("demo persistence: truncated file is a parse error with a line number") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1009);
  const DemoSet set = generate_demos(spec, 3, rng);
  const auto path = temp_file("aced_demo_truncated.jsonl");
  save_demos(set, path);

  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::ofstream(path) << all.substr(0, all.size() * 2 / 3);

  CHECK_THROWS_AS(load_demos(path), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("demo persistence: states-only sets load, feed the curriculum, not BC") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1010);
  DemoSet set = generate_demos(spec, 8, rng);
  for (Trajectory& t : set.trajectories) t.actions.clear();
  const auto path = temp_file("aced_demo_states_only.jsonl");
  save_demos(set, path);
  const DemoSet back = load_demos(path);
  CHECK_FALSE(has_actions(back));

  // usable by the curriculum engine
  CurriculumState cs;
  cs.c_max = 5;
  cs.curriculum = 2;
  const EnvState st = curriculum_reset(back, cs, rng);
  Env env(spec);
  env.set_state(st);  // no throw: states are valid

  // rejected by behavior cloning
  Rng prng = make_rng(1);
  GaussianPolicy policy = make_gaussian_policy(spec.obs_dim(), EnvSpec::action_dim(), prng);
  BcConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_AS(bc_pretrain(back, spec, policy, cfg, prng), ContractError);
  std::filesystem::remove(path);
}

TEST_CASE("subsample keeps the leading trajectories and the batch metadata") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(1011);
  const DemoSet set = generate_demos(spec, 30, rng);
  const DemoSet five = subsample_demos(set, 5);
  CHECK(five.size() == 5);
  CHECK(five.p_success == set.p_success);
  CHECK(states_bitwise_equal(five.trajectories[0].states[0], set.trajectories[0].states[0]));
  CHECK_THROWS_AS(subsample_demos(set, set.size() + 1), ContractError);
}
