#ifndef ACED_HARNESS_CONFIG_HPP_
#define ACED_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "aced/rl/ddpg.hpp"
#include "aced/rl/ppo.hpp"
#include "aced/rl/bc.hpp"

namespace aced {

enum class Method { aced, aced_bc, bc_rl, vanilla, reverse_curriculum, single_demo };
enum class Algo { ppo, ddpg };

std::string to_string(Method m);
std::string to_string(Algo a);
Method method_from_string(const std::string& s);
Algo algo_from_string(const std::string& s);

// Every tunable of a training run. Fields left negative (or empty) pick
// task-dependent defaults in resolve(): phi 0.9 / 0.85, PPO clip 0.2 / 0.05,
// lr 2e-4 / 1e-4, grad clip off / 0.05, budget 2M / 10M env steps for
// pick-place / stacking respectively.
struct ExperimentConfig {
  std::string task = "pick-place";  // pick-place | stack
  Method method = Method::aced_bc;
  Algo algo = Algo::ppo;
  std::string demos_path;
  int num_demos = -1;  // |T|; -1 = use the whole set
  int c_max = 5;
  double phi = -1.0;
  int check_period = 120;  // t
  int window = 3;          // n
  int workers = 60;
  std::uint64_t seed = 1;
  long max_env_steps = -1;
  int eval_episodes = 100;
  int eval_period = 25;  // iterations between periodic evaluations; 0 = off
  bool halt_on_convergence = true;
  bool shared_curriculum = false;  // one global C instead of per-worker
  bool two_phase_stacking = true;  // flip all workers to normal once all reach C_max
  bool verbose = false;

  // Convergence: success rate over the last conv_window episodes at or above
  // conv_threshold for conv_checks consecutive iterations.
  int conv_window = 50;
  int conv_checks = 5;
  double conv_threshold = 0.9;

  // clip_eps and lr start unset (-1) so resolve() can apply task defaults.
  static PpoConfig unresolved_ppo() {
    PpoConfig p;
    p.clip_eps = -1.0;
    p.lr = -1.0;
    return p;
  }
  PpoConfig ppo = unresolved_ppo();
  DdpgConfig ddpg;
  BcConfig bc;

  std::string out_dir;

  bool uses_demos() const {
    return method == Method::aced || method == Method::aced_bc || method == Method::bc_rl ||
           method == Method::single_demo;
  }
  bool uses_curriculum() const {
    return method == Method::aced || method == Method::aced_bc || method == Method::single_demo;
  }
  bool uses_bc() const { return method == Method::aced_bc || method == Method::bc_rl; }
};

// Applies task-dependent defaults and the single-demo translation
// (|T| = 1, no BC, phi = 0.85), then validates. Throws on bad values or on a
// missing demos file when the method needs one.
ExperimentConfig resolve(ExperimentConfig cfg);

// Flat key = value file; '#' or ';' start comments. Unknown keys are errors.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

}  // namespace aced

#endif  // ACED_HARNESS_CONFIG_HPP_
