#include "aced/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include "aced/baselines/reverse_curriculum.hpp"
#include "aced/curriculum/curriculum.hpp"
#include "aced/harness/convergence.hpp"
#include "aced/harness/metrics.hpp"
#include "aced/math/checkpoint.hpp"
#include "aced/rl/bc.hpp"
#include "aced/rl/rollout.hpp"

namespace aced {

namespace {

// Seed-stream ids; every consumer of randomness owns one.
enum Stream : std::uint64_t {
  kInit = 1,
  kBc = 2,
  kTrainer = 3,
  kReverseCurriculum = 4,
  kFinalEval = 5,
  kPeriodicEvalBase = 1000000,
  kWorkerBase = 2000000,
};

struct Worker {
  Env env;
  Rng rng;
  CurriculumState cur;
  Worker(const EnvSpec& spec, Rng r) : env(spec), rng(std::move(r)) {}
};

VectorXd clamp_unit(VectorXd a) {
  return a.array().min(1.0).max(-1.0).matrix();
}

}  // namespace

double evaluate_policy(const EnvSpec& spec, const GaussianPolicy& policy, int episodes,
                       Rng& rng) {
  return evaluate(spec, [&](const VectorXd& obs) { return policy.mean(obs); }, episodes, rng);
}

GaussianPolicy make_bc_policy(const ExperimentConfig& raw) {
  ExperimentConfig cfg = resolve(raw);
  const EnvSpec spec = cfg.task == "stack" ? EnvSpec::stack() : EnvSpec::pick_place();
  DemoSet demos = load_demos(cfg.demos_path);
  if (demos.spec_id != spec.id())
    throw std::runtime_error("demo set was recorded for " + demos.spec_id + ", not " + spec.id());
  if (cfg.num_demos > 0) demos = subsample_demos(demos, cfg.num_demos);

  Rng init_rng = make_rng(derive_seed(cfg.seed, kInit));
  GaussianPolicy policy = make_gaussian_policy(spec.obs_dim(), EnvSpec::action_dim(), init_rng);
  Rng bc_rng = make_rng(derive_seed(cfg.seed, kBc));
  bc_pretrain(demos, spec, policy, cfg.bc, bc_rng);
  return policy;
}

RunResult run_experiment(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = resolve(raw);
  const EnvSpec spec = cfg.task == "stack" ? EnvSpec::stack() : EnvSpec::pick_place();
  const auto t_start = std::chrono::steady_clock::now();

  if (cfg.algo == Algo::ddpg && cfg.uses_bc())
    throw ParseError("behavior cloning with the DDPG actor is not supported; use algo=ppo");

  DemoSet demos;
  if (cfg.uses_demos()) {
    demos = load_demos(cfg.demos_path);
    if (demos.spec_id != spec.id())
      throw std::runtime_error("demo set was recorded for " + demos.spec_id + ", not " +
                               spec.id());
    if (cfg.num_demos > 0) demos = subsample_demos(demos, cfg.num_demos);
    if (cfg.uses_curriculum()) validate_demos_for_sectioning(demos, cfg.c_max);
  }

  Rng init_rng = make_rng(derive_seed(cfg.seed, kInit));
  GaussianPolicy policy = make_gaussian_policy(spec.obs_dim(), EnvSpec::action_dim(), init_rng);
  Mlpd value = make_value_net(spec.obs_dim(), init_rng);
  PpoOptimState ppo_optim = make_ppo_optim(policy, value, cfg.ppo);

  std::optional<DdpgAgent> ddpg;
  std::optional<ReplayBuffer> replay;
  if (cfg.algo == Algo::ddpg) {
    ddpg = make_ddpg_agent(spec.obs_dim(), EnvSpec::action_dim(), cfg.ddpg, init_rng);
    replay.emplace(cfg.ddpg.replay_capacity);
  }

  if (cfg.uses_bc()) {
    Rng bc_rng = make_rng(derive_seed(cfg.seed, kBc));
    bc_pretrain(demos, spec, policy, cfg.bc, bc_rng);
  }

  Rng trainer_rng = make_rng(derive_seed(cfg.seed, kTrainer));

  std::vector<Worker> workers;
  workers.reserve(cfg.workers);
  for (int i = 0; i < cfg.workers; ++i) {
    workers.emplace_back(spec, make_rng(derive_seed(cfg.seed, kWorkerBase + i)));
    workers.back().cur.c_max = cfg.c_max;
    workers.back().cur.mode =
        cfg.uses_curriculum() ? WorkerMode::curriculum : WorkerMode::normal;
  }
  const AdvanceRule rule{cfg.phi, cfg.check_period, cfg.window};
  // The shared-curriculum variant records every episode into one state, so
  // its check clock counts episodes: t iterations == t * workers episodes.
  const AdvanceRule shared_rule{cfg.phi, cfg.check_period * cfg.workers, cfg.window};
  CurriculumState shared_cur;
  shared_cur.c_max = cfg.c_max;
  shared_cur.mode = cfg.uses_curriculum() ? WorkerMode::curriculum : WorkerMode::normal;

  std::optional<ReverseCurriculumState> rc;
  Rng rc_rng = make_rng(derive_seed(cfg.seed, kReverseCurriculum));
  ReverseCurriculumConfig rc_cfg;
  if (cfg.method == Method::reverse_curriculum) rc.emplace(spec, rc_cfg, rc_rng);

  const bool write_files = !cfg.out_dir.empty();
  std::optional<MetricsWriter> metrics;
  std::optional<CurriculumTraceWriter> trace;
  std::ofstream evals_csv;
  if (write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    metrics.emplace(dir / "metrics.csv");
    trace.emplace(dir / "curriculum.csv");
    evals_csv.open(dir / "evals.csv");
    evals_csv << "iteration,env_steps,eval_success\n";
    save_config(cfg, dir / "config.ini");
    for (int i = 0; i < cfg.workers; ++i)
      trace->write(i, 0, cfg.shared_curriculum ? shared_cur.curriculum : workers[i].cur.curriculum,
                   workers[i].cur.mode == WorkerMode::normal);
  }

  ConvergenceTracker conv(cfg.conv_window, cfg.conv_checks, cfg.conv_threshold);
  RolloutCollector collector(spec.obs_dim(), EnvSpec::action_dim());

  RunResult res;
  res.demos_p_success = demos.p_success;
  long steps_total = 0;
  long iteration = 0;
  bool two_phase_done = false;

  const auto eval_now = [&](std::uint64_t stream) {
    Rng eval_rng = make_rng(derive_seed(cfg.seed, stream));
    if (cfg.algo == Algo::ppo)
      return evaluate_policy(spec, policy, cfg.eval_episodes, eval_rng);
    return evaluate(
        spec, [&](const VectorXd& obs) { return ddpg_action(*ddpg, obs); }, cfg.eval_episodes,
        eval_rng);
  };

  while (steps_total < cfg.max_env_steps) {
    ++iteration;
    collector.clear();
    double iter_return_sum = 0.0;
    int iter_episodes = 0;

    for (int wi = 0; wi < cfg.workers; ++wi) {
      Worker& w = workers[wi];
      CurriculumState& cur = cfg.shared_curriculum ? shared_cur : w.cur;
      const AdvanceRule& active_rule = cfg.shared_curriculum ? shared_rule : rule;

      int rc_index = -1;
      if (cfg.uses_curriculum() && cur.mode == WorkerMode::curriculum) {
        w.env.set_state(curriculum_reset(demos, cur, w.rng));
      } else if (cfg.method == Method::reverse_curriculum) {
        w.env.set_state(rc->sample_start(w.rng, &rc_index));
      } else {
        w.env.reset(w.rng);
      }

      collector.begin_episode();
      double ep_return = 0.0;
      double last_reward = 0.0;
      bool done = false;
      while (!done) {
        const VectorXd obs = observe(spec, w.env.state());
        VectorXd a;
        double logp = 0.0, v = 0.0;
        if (cfg.algo == Algo::ppo) {
          a = policy.sample(obs, w.rng, &logp);
          v = mlp_forward(value, obs)(0);
        } else {
          a = ddpg_action(*ddpg, obs);
          for (Eigen::Index d = 0; d < a.size(); ++d)
            a(d) += normal(w.rng, 0.0, cfg.ddpg.noise_std);
          a = clamp_unit(std::move(a));
        }
        EnvAction action;
        action.dx = a(0);
        action.dz = a(1);
        action.grip = a(2);
        const StepResult sr = w.env.step(action);
        if (cfg.algo == Algo::ppo) {
          collector.add_step(obs, a, sr.reward, sr.done, v, logp);
        } else {
          Transition t;
          t.obs = obs;
          t.action = a;
          t.reward = sr.reward;
          t.next_obs = observe(spec, sr.state);
          t.done = sr.done;
          replay->push(std::move(t));
        }
        ep_return += sr.reward;
        last_reward = sr.reward;
        done = sr.done;
      }
      const bool success = last_reward == 1.0;
      steps_total += w.env.state().timestep;
      collector.end_episode(ep_return, success);
      conv.add_episode(success);
      iter_return_sum += ep_return;
      ++iter_episodes;

      if (cfg.uses_curriculum()) {
        const int before_c = cur.curriculum;
        const WorkerMode before_m = cur.mode;
        record_episode_and_maybe_advance(cur, active_rule, ep_return);
        if (write_files && (cur.curriculum != before_c || cur.mode != before_m))
          trace->write(cfg.shared_curriculum ? -1 : wi, iteration, cur.curriculum,
                       cur.mode == WorkerMode::normal);
      }
      if (rc_index >= 0) rc->note_episode(rc_index, success);
    }

    // Two-phase stacking schedule: once every worker has climbed to C_max,
    // the whole pool switches to normal rollouts.
    if (cfg.uses_curriculum() && cfg.two_phase_stacking && spec.kind == TaskKind::stack &&
        !two_phase_done && !cfg.shared_curriculum) {
      const bool all_maxed = std::all_of(workers.begin(), workers.end(), [&](const Worker& w) {
        return w.cur.mode == WorkerMode::normal || w.cur.curriculum == cfg.c_max;
      });
      if (all_maxed) {
        for (int wi = 0; wi < cfg.workers; ++wi) {
          if (workers[wi].cur.mode != WorkerMode::normal) {
            force_normal(workers[wi].cur);
            if (write_files)
              trace->write(wi, iteration, workers[wi].cur.curriculum, true);
          }
        }
        two_phase_done = true;
      }
    }

    if (cfg.algo == Algo::ppo) {
      const RolloutBatch batch = collector.assemble();
      const PpoDiagnostics diag =
          ppo_update(batch, policy, value, ppo_optim, cfg.ppo, trainer_rng);
      if (diag.aborted)
        std::cerr << "[aced] iteration " << iteration
                  << ": non-finite loss, update abandoned\n";
    } else {
      const int updates = cfg.ddpg.updates_per_episode * cfg.workers;
      for (int k = 0; k < updates; ++k) ddpg_update(*replay, *ddpg, cfg.ddpg, trainer_rng);
    }

    if (rc && iteration % rc->config().refresh_period == 0) rc->refresh(spec, rc_rng);

    MetricsRow row;
    row.iteration = iteration;
    row.env_steps = steps_total;
    row.episodes = iter_episodes;
    row.mean_return = iter_return_sum / iter_episodes;
    row.success_rate = conv.rolling_rate();
    double c_sum = 0.0;
    int normal_count = 0;
    for (const Worker& w : workers) {
      const CurriculumState& cur = cfg.shared_curriculum ? shared_cur : w.cur;
      c_sum += cur.curriculum;
      if (cur.mode == WorkerMode::normal) ++normal_count;
    }
    row.mean_curriculum = c_sum / cfg.workers;
    row.frac_normal = static_cast<double>(normal_count) / cfg.workers;
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (metrics) metrics->write(row);

    if (!res.converged && conv.check()) {
      res.converged = true;
      res.steps_at_convergence = steps_total;
    }

    if (cfg.eval_period > 0 && iteration % cfg.eval_period == 0) {
      const double s = eval_now(kPeriodicEvalBase + iteration);
      res.evals.push_back({iteration, steps_total, s});
      if (write_files) {
        evals_csv << iteration << ',' << steps_total << ',' << format_double(s) << "\n";
        evals_csv.flush();
      }
    }

    if (cfg.verbose && iteration % 100 == 0)
      std::cerr << "[aced] it " << iteration << "  steps " << steps_total << "  succ "
                << row.success_rate << "  C " << row.mean_curriculum << "  normal "
                << row.frac_normal << "\n";

    if (res.converged && cfg.halt_on_convergence) break;
  }

  res.final_eval = eval_now(kFinalEval);
  res.evals.push_back({iteration, steps_total, res.final_eval});
  res.total_steps = steps_total;
  res.iterations = iteration;
  for (const Worker& w : workers) res.audit_steps += w.env.steps_taken();
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  res.policy = policy;
  if (cfg.algo == Algo::ppo) res.value = value;
  if (ddpg) res.ddpg = *ddpg;

  if (write_files) {
    const std::filesystem::path dir(cfg.out_dir);
    if (evals_csv.is_open()) {
      evals_csv << res.iterations << ',' << res.total_steps << ','
                << format_double(res.final_eval) << "\n";
    }
    Checkpoint ckpt;
    ckpt.spec_id = spec.id();
    ckpt.algo = to_string(cfg.algo);
    ckpt.policy = policy;
    if (cfg.algo == Algo::ppo) {
      ckpt.value = value;
      ckpt.policy_optim = ppo_optim.policy_net;
      ckpt.log_std_optim = ppo_optim.log_std;
      ckpt.value_optim = ppo_optim.value_net;
    } else {
      ckpt.ddpg = *ddpg;
    }
    save_checkpoint(ckpt, dir / "checkpoint.json");

    std::ofstream summary(dir / "summary.txt");
    summary << "method: " << to_string(cfg.method) << "\n"
            << "algo: " << to_string(cfg.algo) << "\n"
            << "task: " << cfg.task << "\n"
            << "seed: " << cfg.seed << "\n"
            << "converged: " << (res.converged ? "yes" : "no") << "\n"
            << "steps_at_convergence: " << res.steps_at_convergence << "\n"
            << "total_env_steps: " << res.total_steps << "\n"
            << "iterations: " << res.iterations << "\n"
            << "final_eval_success: " << res.final_eval << "\n"
            << "wall_time_s: " << res.wall_time_s << "\n";
  }
  return res;
}

}  // namespace aced
