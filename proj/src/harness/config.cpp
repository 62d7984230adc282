#include "aced/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "aced/env/env.hpp"

namespace aced {

std::string to_string(Method m) {
  switch (m) {
    case Method::aced: return "aced";
    case Method::aced_bc: return "aced-bc";
    case Method::bc_rl: return "bc-rl";
    case Method::vanilla: return "vanilla";
    case Method::reverse_curriculum: return "reverse-curriculum";
    case Method::single_demo: return "single-demo";
  }
  return "?";
}

std::string to_string(Algo a) { return a == Algo::ppo ? "ppo" : "ddpg"; }

Method method_from_string(const std::string& s) {
  if (s == "aced") return Method::aced;
  if (s == "aced-bc") return Method::aced_bc;
  if (s == "bc-rl") return Method::bc_rl;
  if (s == "vanilla") return Method::vanilla;
  if (s == "reverse-curriculum") return Method::reverse_curriculum;
  if (s == "single-demo") return Method::single_demo;
  throw ParseError("unknown method: " + s);
}

Algo algo_from_string(const std::string& s) {
  if (s == "ppo") return Algo::ppo;
  if (s == "ddpg") return Algo::ddpg;
  throw ParseError("unknown algorithm: " + s);
}

ExperimentConfig resolve(ExperimentConfig cfg) {
  const bool stacking = cfg.task == "stack";
  if (!stacking && cfg.task != "pick-place")
    throw ParseError("unknown task: " + cfg.task + " (expected pick-place or stack)");

  if (cfg.method == Method::single_demo) {
    // Fixed-demonstration baseline: identical machinery, one trajectory,
    // no BC, threshold 0.85.
    cfg.num_demos = 1;
    if (cfg.phi < 0.0) cfg.phi = 0.85;
  }
  if (cfg.phi < 0.0) cfg.phi = stacking ? 0.85 : 0.9;
  if (cfg.max_env_steps < 0) cfg.max_env_steps = stacking ? 10000000L : 2000000L;

  cfg.ppo.clip_eps = cfg.ppo.clip_eps >= 0.0 ? cfg.ppo.clip_eps : (stacking ? 0.05 : 0.2);
  cfg.ppo.lr = cfg.ppo.lr >= 0.0 ? cfg.ppo.lr : (stacking ? 1e-4 : 2e-4);
  if (stacking && !cfg.ppo.grad_clip_norm) cfg.ppo.grad_clip_norm = 0.05;

  if (cfg.c_max < 1) throw ParseError("c_max must be >= 1");
  if (cfg.workers < 1) throw ParseError("workers must be >= 1");
  if (cfg.phi <= 0.0 || cfg.phi > 1.0) throw ParseError("phi must be in (0, 1]");
  if (cfg.check_period < 1) throw ParseError("check_period must be >= 1");
  if (cfg.window < 1) throw ParseError("window must be >= 1");
  if (cfg.eval_episodes < 1) throw ParseError("eval_episodes must be >= 1");
  if (cfg.uses_demos()) {
    if (cfg.demos_path.empty()) throw ParseError("method " + to_string(cfg.method) +
                                                 " needs demos=<path>");
    if (!std::filesystem::exists(cfg.demos_path))
      throw ParseError("demos file not found: " + cfg.demos_path);
  }
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError("expected boolean, got: " + v);
}

}  // namespace

void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "task") cfg.task = value;
    else if (key == "method") cfg.method = method_from_string(value);
    else if (key == "algo") cfg.algo = algo_from_string(value);
    else if (key == "demos") cfg.demos_path = value;
    else if (key == "num_demos") cfg.num_demos = std::stoi(value);
    else if (key == "c_max") cfg.c_max = std::stoi(value);
    else if (key == "phi") cfg.phi = std::stod(value);
    else if (key == "check_period") cfg.check_period = std::stoi(value);
    else if (key == "window") cfg.window = std::stoi(value);
    else if (key == "workers") cfg.workers = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "max_env_steps") cfg.max_env_steps = std::stol(value);
    else if (key == "eval_episodes") cfg.eval_episodes = std::stoi(value);
    else if (key == "eval_period") cfg.eval_period = std::stoi(value);
    else if (key == "halt_on_convergence") cfg.halt_on_convergence = parse_bool(value);
    else if (key == "shared_curriculum") cfg.shared_curriculum = parse_bool(value);
    else if (key == "two_phase_stacking") cfg.two_phase_stacking = parse_bool(value);
    else if (key == "verbose") cfg.verbose = parse_bool(value);
    else if (key == "conv_window") cfg.conv_window = std::stoi(value);
    else if (key == "conv_checks") cfg.conv_checks = std::stoi(value);
    else if (key == "conv_threshold") cfg.conv_threshold = std::stod(value);
    else if (key == "gamma") { cfg.ppo.gamma = std::stod(value); cfg.ddpg.gamma = std::stod(value); }
    else if (key == "lambda") cfg.ppo.lambda = std::stod(value);
    else if (key == "clip_eps") cfg.ppo.clip_eps = std::stod(value);
    else if (key == "lr") cfg.ppo.lr = std::stod(value);
    else if (key == "grad_clip") cfg.ppo.grad_clip_norm = std::stod(value);
    else if (key == "ppo_epochs") cfg.ppo.epochs = std::stoi(value);
    else if (key == "minibatch") cfg.ppo.minibatch = std::stoi(value);
    else if (key == "value_coef") cfg.ppo.value_coef = std::stod(value);
    else if (key == "entropy_coef") cfg.ppo.entropy_coef = std::stod(value);
    else if (key == "ddpg_lr") cfg.ddpg.lr = std::stod(value);
    else if (key == "target_period") cfg.ddpg.target_period = std::stoi(value);
    else if (key == "replay_capacity") cfg.ddpg.replay_capacity = std::stoul(value);
    else if (key == "batch_size") cfg.ddpg.batch_size = std::stoi(value);
    else if (key == "noise_std") cfg.ddpg.noise_std = std::stod(value);
    else if (key == "updates_per_episode") cfg.ddpg.updates_per_episode = std::stoi(value);
    else if (key == "bc_epochs") cfg.bc.epochs = std::stoi(value);
    else if (key == "bc_lr") cfg.bc.lr = std::stod(value);
    else if (key == "out_dir") cfg.out_dir = value;
    else throw ParseError("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad value for " + key + ": " + value);
  } catch (const std::out_of_range&) {
    throw ParseError("value out of range for " + key + ": " + value);
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path.string());

  ExperimentConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_key_value(cfg, key, value);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return cfg;
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_config: cannot open " + path.string());
  out << "task = " << cfg.task << "\n";
  out << "method = " << to_string(cfg.method) << "\n";
  out << "algo = " << to_string(cfg.algo) << "\n";
  if (!cfg.demos_path.empty()) out << "demos = " << cfg.demos_path << "\n";
  out << "num_demos = " << cfg.num_demos << "\n";
  out << "c_max = " << cfg.c_max << "\n";
  out << "phi = " << cfg.phi << "\n";
  out << "check_period = " << cfg.check_period << "\n";
  out << "window = " << cfg.window << "\n";
  out << "workers = " << cfg.workers << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "max_env_steps = " << cfg.max_env_steps << "\n";
  out << "eval_episodes = " << cfg.eval_episodes << "\n";
  out << "eval_period = " << cfg.eval_period << "\n";
  out << "halt_on_convergence = " << (cfg.halt_on_convergence ? "true" : "false") << "\n";
  out << "shared_curriculum = " << (cfg.shared_curriculum ? "true" : "false") << "\n";
  out << "two_phase_stacking = " << (cfg.two_phase_stacking ? "true" : "false") << "\n";
  out << "conv_window = " << cfg.conv_window << "\n";
  out << "conv_checks = " << cfg.conv_checks << "\n";
  out << "conv_threshold = " << cfg.conv_threshold << "\n";
  out << "gamma = " << cfg.ppo.gamma << "\n";
  out << "lambda = " << cfg.ppo.lambda << "\n";
  out << "clip_eps = " << cfg.ppo.clip_eps << "\n";
  out << "lr = " << cfg.ppo.lr << "\n";
  if (cfg.ppo.grad_clip_norm) out << "grad_clip = " << *cfg.ppo.grad_clip_norm << "\n";
  out << "ppo_epochs = " << cfg.ppo.epochs << "\n";
  out << "minibatch = " << cfg.ppo.minibatch << "\n";
  out << "value_coef = " << cfg.ppo.value_coef << "\n";
  out << "entropy_coef = " << cfg.ppo.entropy_coef << "\n";
  out << "ddpg_lr = " << cfg.ddpg.lr << "\n";
  out << "target_period = " << cfg.ddpg.target_period << "\n";
  out << "replay_capacity = " << cfg.ddpg.replay_capacity << "\n";
  out << "batch_size = " << cfg.ddpg.batch_size << "\n";
  out << "noise_std = " << cfg.ddpg.noise_std << "\n";
  out << "updates_per_episode = " << cfg.ddpg.updates_per_episode << "\n";
  out << "bc_epochs = " << cfg.bc.epochs << "\n";
  out << "bc_lr = " << cfg.bc.lr << "\n";
  if (!cfg.out_dir.empty()) out << "out_dir = " << cfg.out_dir << "\n";
}

}  // namespace aced
