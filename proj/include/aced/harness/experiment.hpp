#ifndef ACED_HARNESS_EXPERIMENT_HPP_
#define ACED_HARNESS_EXPERIMENT_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "aced/demo/demo.hpp"
#include "aced/env/env.hpp"
#include "aced/harness/config.hpp"
#include "aced/rl/ddpg.hpp"
#include "aced/rl/policy.hpp"

namespace aced {

struct EvalPoint {
  long iteration = 0;
  long env_steps = 0;
  double success = 0.0;
};

struct RunResult {
  bool converged = false;
  long steps_at_convergence = -1;
  long total_steps = 0;
  long iterations = 0;
  double final_eval = 0.0;
  std::vector<EvalPoint> evals;  // periodic evaluations plus the final one
  std::uint64_t audit_steps = 0; // independent per-env step counters, summed
  double wall_time_s = 0.0;
  double demos_p_success = 0.0;  // expert success rate of the demo batch used
  GaussianPolicy policy;         // PPO policy or a mean-view of the DDPG actor
  std::optional<Mlpd> value;
  std::optional<DdpgAgent> ddpg;
};

// Fraction of successful episodes over fresh resets from the task's true
// initial and goal distributions, acting deterministically through `act`
// (obs -> action). Never uses curriculum resets.
template <typename PolicyFn>
double evaluate(const EnvSpec& spec, PolicyFn&& act, int episodes, Rng& rng) {
  if (episodes < 1) throw ContractError("evaluate: episodes must be >= 1");
  Env env(spec);
  int successes = 0;
  for (int e = 0; e < episodes; ++e) {
    env.reset(rng);
    bool done = false;
    double reward = 0.0;
    while (!done) {
      const VectorXd a = act(observe(spec, env.state()));
      EnvAction action;
      action.dx = a(0);
      action.dz = a(1);
      action.grip = a(2);
      const StepResult sr = env.step(action);
      done = sr.done;
      reward = sr.reward;
    }
    if (reward == 1.0) ++successes;
  }
  return static_cast<double>(successes) / episodes;
}

double evaluate_policy(const EnvSpec& spec, const GaussianPolicy& policy, int episodes, Rng& rng);

// Full training run per the config: parallel-worker episode collection,
// per-worker curriculum advancement, PPO or DDPG updates, metrics streaming,
// halting at convergence or the step budget. Writes metrics.csv,
// curriculum.csv, evals.csv, checkpoint.json, config.ini and summary.txt
// under cfg.out_dir when set.
RunResult run_experiment(const ExperimentConfig& cfg);

// The behavior-cloning initialization a run with this config would start
// from (same seed streams); useful for scoring the BC policy on its own.
GaussianPolicy make_bc_policy(const ExperimentConfig& cfg);

}  // namespace aced

#endif  // ACED_HARNESS_EXPERIMENT_HPP_
