#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "aced/curriculum/curriculum.hpp"
#include "aced/demo/demo.hpp"

using namespace aced;

namespace {

// Straight-line reference for the advancement rule: keeps the full return
// history and re-derives the state from scratch at every check.
struct AdvanceReference {
  int c = 1;
  int c_max;
  bool normal = false;
  std::vector<double> returns;
  int calls = 0;

  explicit AdvanceReference(int cm) : c_max(cm) {}

  void record(const AdvanceRule& rule, double ret) {
    if (normal) return;
    returns.push_back(ret);
    if (++calls % rule.check_period != 0) return;
    const int n = std::min<int>(rule.window_size, returns.size());
    if (n == 0) return;
    const double mean =
        std::accumulate(returns.end() - n, returns.end(), 0.0) / n;
    if (mean < rule.threshold) return;
    if (c < c_max)
      ++c;
    else
      normal = true;
  }
};

}  // namespace

TEST_CASE("section_index: length 51, C_max 5 puts C=1 in {40..49} and C=5 in {0..9}") {
  Rng rng = make_rng(1);
  std::set<int> seen1, seen5;
  for (int i = 0; i < 4000; ++i) {
    const int i1 = section_index(51, 5, 1, rng);
    CHECK(i1 >= 40);
    CHECK(i1 <= 49);
    seen1.insert(i1);
    const int i5 = section_index(51, 5, 5, rng);
    CHECK(i5 >= 0);
    CHECK(i5 <= 9);
    seen5.insert(i5);
  }
  CHECK(seen1.size() == 10);  // whole section reachable
  CHECK(seen5.size() == 10);
}

TEST_CASE("section_index: length 6, C_max 5 is deterministic at 5 - C") {
  Rng rng = make_rng(2);
  for (int c = 1; c <= 5; ++c)
    for (int k = 0; k < 20; ++k) CHECK(section_index(6, 5, c, rng) == 5 - c);
}

TEST_CASE("section_index: exhaustive sweep never samples the goal state") {
  // Every (length, c_max, c) with c_max <= 12; samples cover each section
  // value, and no draw may reach the final state's index.
  Rng rng = make_rng(3);
  for (int length = 2; length <= 60; ++length) {
    for (int c_max = 1; c_max <= 12; ++c_max) {
      const int interval = (length - 1) / c_max;
      for (int c = 1; c <= c_max; ++c) {
        if (interval == 0) {
          CHECK_THROWS_AS(section_index(length, c_max, c, rng), ContractError);
          continue;
        }
        std::set<int> seen;
        const int draws = 12 * interval + 24;
        for (int k = 0; k < draws; ++k) {
          const int idx = section_index(length, c_max, c, rng);
          CHECK(idx >= interval * (c_max - c));
          CHECK(idx < interval * (c_max - c + 1));
          CHECK(idx < length - 1);
          seen.insert(idx);
        }
        CHECK(static_cast<int>(seen.size()) == interval);
      }
    }
  }
}

TEST_CASE("section_index: bad arguments are contract violations") {
  Rng rng = make_rng(4);
  CHECK_THROWS_AS(section_index(10, 0, 1, rng), ContractError);
  CHECK_THROWS_AS(section_index(10, 3, 0, rng), ContractError);
  CHECK_THROWS_AS(section_index(10, 3, 4, rng), ContractError);
  CHECK_THROWS_AS(section_index(1, 1, 1, rng), ContractError);
  CHECK_THROWS_AS(section_index(5, 5, 2, rng), ContractError);  // interval 0
}

TEST_CASE("section_index: uniform within the section (chi-square)") {
  Rng rng = make_rng(5);
  const int interval = 10;  // length 51, c_max 5
  std::vector<int> counts(interval, 0);
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const int idx = section_index(51, 5, 2, rng);
    ++counts[idx - 30];  // section C=2 starts at interval*(5-2)=30
  }
  const double expected = static_cast<double>(n) / interval;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // critical value for df=9 at p=0.01
  CHECK(chi2 < 21.666);
}

TEST_CASE("curriculum_reset: a single demo is always the one chosen") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(6);
  DemoSet demos = generate_demos(spec, 20, rng);
  demos = subsample_demos(demos, 1);
  CurriculumState cs;
  cs.c_max = 5;
  cs.curriculum = 3;
  for (int k = 0; k < 50; ++k) {
    const EnvState st = curriculum_reset(demos, cs, rng);
    bool found = false;
    for (const EnvState& ds : demos.trajectories[0].states)
      if (ds.gripper == st.gripper && ds.timestep == st.timestep) found = true;
    CHECK(found);
  }
}

TEST_CASE("curriculum_reset: C=1 resets land in the final section near the goal") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(7);
  const DemoSet demos = generate_demos(spec, 5, rng);
  CurriculumState cs;
  cs.c_max = 5;
  cs.curriculum = 1;
  for (int k = 0; k < 100; ++k) {
    const EnvState st = curriculum_reset(demos, cs, rng);
    bool in_tail = false;
    for (const Trajectory& t : demos.trajectories) {
      const int interval = (t.length() - 1) / 5;
      for (int i = interval * 4; i < interval * 5; ++i) {
        const EnvState& ds = t.states[i];
        if (ds.gripper == st.gripper && ds.aperture == st.aperture) in_tail = true;
      }
    }
    CHECK(in_tail);
  }
}

TEST_CASE("curriculum_reset: demos drawn uniformly (multinomial bound)") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(8);
  DemoSet demos = generate_demos(spec, 40, rng);
  demos = subsample_demos(demos, 5);
  CurriculumState cs;
  cs.c_max = 5;
  cs.curriculum = 2;
  std::map<double, int> counts;  // first-state gripper x identifies the demo
  for (int k = 0; k < 10000; ++k) {
    const EnvState st = curriculum_reset(demos, cs, rng);
    for (int d = 0; d < demos.size(); ++d) {
      const Trajectory& t = demos.trajectories[d];
      const int interval = (t.length() - 1) / 5;
      for (int i = interval * 3; i < interval * 4; ++i)
        if (t.states[i].gripper == st.gripper && t.states[i].aperture == st.aperture) {
          counts[d] += 1;
          i = t.length();
          d = demos.size();
        }
    }
  }
  int total = 0;
  for (const auto& [d, c] : counts) {
    CHECK(std::abs(c - 2000) <= 150);
    total += c;
  }
  CHECK(total == 10000);
}

TEST_CASE("curriculum_reset: errors name the offending demo and empty sets are rejected") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(9);
  DemoSet demos = generate_demos(spec, 3, rng);
  // Truncate one demo so sectioning with a large c_max fails.
  demos.trajectories[0].states.resize(4);
  demos.trajectories[0].actions.resize(3);
  demos.trajectories[0].rewards.resize(3);
  CurriculumState cs;
  cs.c_max = 12;
  cs.curriculum = 1;
  bool threw = false;
  for (int k = 0; k < 64 && !threw; ++k) {
    try {
      curriculum_reset(demos, cs, rng);
    } catch (const ContractError& e) {
      threw = true;
      CHECK(std::string(e.what()).find("demo 0") != std::string::npos);
    }
  }
  CHECK(threw);

  DemoSet empty;
  CHECK_THROWS_AS(curriculum_reset(empty, cs, rng), ContractError);

  cs.mode = WorkerMode::normal;
  CHECK_THROWS_AS(curriculum_reset(demos, cs, rng), ContractError);
}

TEST_CASE("validate_demos_for_sectioning rejects too-short demos by index") {
  const EnvSpec spec = EnvSpec::pick_place();
  Rng rng = make_rng(10);
  DemoSet demos = generate_demos(spec, 4, rng);
  validate_demos_for_sectioning(demos, 5);  // expert demos are long enough
  demos.trajectories[2].states.resize(5);
  CHECK_THROWS_WITH_AS(validate_demos_for_sectioning(demos, 5), doctest::Contains("demo 2"),
                       ContractError);
}

TEST_CASE("advancement: three successes at a check raise C by one") {
  CurriculumState cs;
  cs.c_max = 5;
  cs.curriculum = 2;
  const AdvanceRule rule{0.9, 3, 3};
  record_episode_and_maybe_advance(cs, rule, 1.0);
  record_episode_and_maybe_advance(cs, rule, 1.0);
  CHECK(cs.curriculum == 2);  // not a check iteration yet
  record_episode_and_maybe_advance(cs, rule, 1.0);
  CHECK(cs.curriculum == 3);
  CHECK(cs.mode == WorkerMode::curriculum);
}

TEST_CASE("advancement: a window mean below the threshold leaves the state alone") {
  CurriculumState cs;
  cs.c_max = 5;
  const AdvanceRule rule{0.9, 3, 3};
  record_episode_and_maybe_advance(cs, rule, 1.0);
  record_episode_and_maybe_advance(cs, rule, 0.0);
  record_episode_and_maybe_advance(cs, rule, 1.0);  // mean 2/3 < 0.9
  CHECK(cs.curriculum == 1);
  CHECK(cs.mode == WorkerMode::curriculum);
}

TEST_CASE("advancement: at C_max the worker switches to normal and stays there") {
  CurriculumState cs;
  cs.c_max = 5;
  cs.curriculum = 5;
  const AdvanceRule rule{0.9, 3, 3};
  for (int k = 0; k < 3; ++k) record_episode_and_maybe_advance(cs, rule, 1.0);
  CHECK(cs.mode == WorkerMode::normal);
  CHECK(cs.curriculum == 5);
  for (int k = 0; k < 9; ++k) record_episode_and_maybe_advance(cs, rule, 1.0);
  CHECK(cs.mode == WorkerMode::normal);
  CHECK(cs.curriculum == 5);
}

TEST_CASE("advancement: non-finite returns are rejected") {
  CurriculumState cs;
  cs.c_max = 3;
  const AdvanceRule rule{0.9, 2, 3};
  CHECK_THROWS_AS(
      record_episode_and_maybe_advance(cs, rule, std::numeric_limits<double>::infinity()),
      ContractError);
}

TEST_CASE("advancement property: matches the straight-line reference on random sequences") {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const int c_max = 1 + uniform_int(rng, 6);
    const AdvanceRule rule{uniform(rng, 0.3, 1.0), 1 + uniform_int(rng, 5),
                           1 + uniform_int(rng, 4)};
    CurriculumState cs;
    cs.c_max = c_max;
    AdvanceReference ref(c_max);

    int last_c = 1;
    bool was_normal = false;
    const int events = 1 + uniform_int(rng, 60);
    for (int e = 0; e < events; ++e) {
      const double ret = bernoulli(rng, 0.6) ? 1.0 : 0.0;
      record_episode_and_maybe_advance(cs, rule, ret);
      ref.record(rule, ret);

      REQUIRE(cs.curriculum == ref.c);
      REQUIRE((cs.mode == WorkerMode::normal) == ref.normal);

      // monotone trace
      REQUIRE(cs.curriculum >= last_c);
      if (was_normal) REQUIRE(cs.mode == WorkerMode::normal);
      last_c = cs.curriculum;
      was_normal = cs.mode == WorkerMode::normal;
    }
  }
}

TEST_CASE("binary reward identity: window mean equals recent success rate") {
  CurriculumState cs;
  cs.c_max = 9;
  const AdvanceRule rule{0.9, 10, 3};  // checks at every 10th episode
  // 9 of 10 successes but the last three all succeed: mean(last 3) = 1 >= 0.9
  const double returns[10] = {0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  for (double r : returns) record_episode_and_maybe_advance(cs, rule, r);
  CHECK(cs.curriculum == 2);
}
