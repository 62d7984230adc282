#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "aced/demo/demo.hpp"
#include "aced/harness/experiment.hpp"
#include "aced/harness/plot.hpp"
#include "aced/math/checkpoint.hpp"
#include "aced/rl/bc.hpp"

using namespace aced;

namespace {

int cmd_gen_demos(const std::string& task, int count, std::uint64_t seed,
                  const std::string& out, const std::string& keep, double jitter) {
  const EnvSpec spec = task == "stack" ? EnvSpec::stack() : EnvSpec::pick_place();
  Rng rng = make_rng(seed);
  const KeepMode mode = keep == "all" ? KeepMode::all : KeepMode::successes_only;
  DemoSet set = generate_demos(spec, count, rng, mode, jitter);
  set.seed = seed;
  save_demos(set, out);
  std::cout << "wrote " << set.size() << " trajectories to " << out
            << " (expert success rate " << set.p_success << ")\n";
  return 0;
}

int cmd_bc_pretrain(const std::string& demos_path, const std::string& out, int epochs, double lr,
                    std::uint64_t seed) {
  const DemoSet demos = load_demos(demos_path);
  const EnvSpec spec = EnvSpec::from_id(demos.spec_id);
  Rng init_rng = make_rng(derive_seed(seed, 1));
  GaussianPolicy policy = make_gaussian_policy(spec.obs_dim(), EnvSpec::action_dim(), init_rng);
  BcConfig cfg;
  cfg.epochs = epochs;
  cfg.lr = lr;
  Rng bc_rng = make_rng(derive_seed(seed, 2));
  const BcReport report = bc_pretrain(demos, spec, policy, cfg, bc_rng);

  Checkpoint ckpt;
  ckpt.spec_id = spec.id();
  ckpt.algo = "bc";
  ckpt.policy = policy;
  save_checkpoint(ckpt, out);
  std::cout << "BC finished after " << report.epochs_run << " epochs, final NLL "
            << report.epoch_losses.back() << "; checkpoint written to " << out << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& sets,
              const std::string& out_dir, bool quiet) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ParseError("--set expects key=value, got: " + kv);
    apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!quiet) cfg.verbose = true;

  const RunResult res = run_experiment(cfg);
  std::cout << "converged: " << (res.converged ? "yes" : "no") << "\n"
            << "steps_at_convergence: " << res.steps_at_convergence << "\n"
            << "total_env_steps: " << res.total_steps << "\n"
            << "final_eval_success: " << res.final_eval << "\n"
            << "wall_time_s: " << res.wall_time_s << "\n";
  return 0;
}

int cmd_eval(const std::string& ckpt_path, int episodes, std::uint64_t seed) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const EnvSpec spec = EnvSpec::from_id(ckpt.spec_id);
  Rng rng = make_rng(seed);
  double success;
  if (ckpt.algo == "ddpg" && ckpt.ddpg) {
    success = evaluate(
        spec, [&](const VectorXd& obs) { return ddpg_action(*ckpt.ddpg, obs); }, episodes, rng);
  } else {
    success = evaluate_policy(spec, ckpt.policy, episodes, rng);
  }
  std::cout << "success_rate: " << success << " (" << episodes << " episodes, task "
            << ckpt.spec_id << ")\n";
  return 0;
}

int cmd_plot(const std::vector<std::string>& files, const std::string& out_dir) {
  std::vector<std::filesystem::path> paths(files.begin(), files.end());
  emit_plots(paths, out_dir);
  std::cout << "wrote " << out_dir << "/curves.svg, convergence_bars.svg, summary.txt\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum-from-demonstrations RL laboratory for 2D manipulation tasks"};
  app.require_subcommand(1);

  // gen-demos
  std::string task = "pick-place", demos_out = "demos.jsonl", keep = "successes";
  int count = 100;
  std::uint64_t seed = 1;
  double jitter = 0.05;
  auto* gen = app.add_subcommand("gen-demos", "Generate scripted-expert demonstrations");
  gen->add_option("--task", task, "pick-place | stack");
  gen->add_option("--count", count, "raw episodes to roll");
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--out", demos_out, "output JSONL path");
  gen->add_option("--keep", keep, "successes | all");
  gen->add_option("--jitter", jitter, "uniform action noise magnitude");

  // bc-pretrain
  std::string bc_demos, bc_out = "bc_checkpoint.json";
  int bc_epochs = 200;
  double bc_lr = 2e-4;
  std::uint64_t bc_seed = 1;
  auto* bc = app.add_subcommand("bc-pretrain", "Behavior-clone a policy from demonstrations");
  bc->add_option("--demos", bc_demos, "demo JSONL path")->required();
  bc->add_option("--out", bc_out, "checkpoint output path");
  bc->add_option("--epochs", bc_epochs, "max epochs");
  bc->add_option("--lr", bc_lr, "Adam learning rate");
  bc->add_option("--seed", bc_seed, "rng seed");

  // train
  std::string config_path, train_out;
  std::vector<std::string> sets;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "Run a training experiment");
  train->add_option("--config", config_path, "INI-style config file");
  train->add_option("--set", sets, "override config entries as key=value")->take_all();
  train->add_option("--out-dir", train_out, "run output directory");
  train->add_flag("--quiet", quiet, "suppress progress lines");

  // eval
  std::string ckpt_path;
  int eval_episodes = 100;
  std::uint64_t eval_seed = 7;
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on fresh episodes");
  ev->add_option("--checkpoint", ckpt_path, "checkpoint path")->required();
  ev->add_option("--episodes", eval_episodes, "evaluation episodes");
  ev->add_option("--seed", eval_seed, "rng seed");

  // plot
  std::vector<std::string> plot_files;
  std::string plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "Render SVG charts from metrics CSV files");
  plot->add_option("files", plot_files, "metrics.csv files")->required();
  plot->add_option("--out-dir", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_demos(task, count, seed, demos_out, keep, jitter);
    if (bc->parsed()) return cmd_bc_pretrain(bc_demos, bc_out, bc_epochs, bc_lr, bc_seed);
    if (train->parsed()) return cmd_train(config_path, sets, train_out, quiet);
    if (ev->parsed()) return cmd_eval(ckpt_path, eval_episodes, eval_seed);
    if (plot->parsed()) return cmd_plot(plot_files, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
