#ifndef ACED_MATH_CHECKPOINT_HPP_
#define ACED_MATH_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "aced/math/adam.hpp"
#include "aced/math/mlp.hpp"
#include "aced/rl/ddpg.hpp"
#include "aced/rl/policy.hpp"

namespace aced {

// Versioned JSON checkpoint: policy (and value / critic nets when present)
// as arrays of layers with declared shapes, plus optimizer moments so
// training can resume bit-for-bit.
struct Checkpoint {
  std::string spec_id;
  std::string algo;  // "ppo" | "ddpg" | "bc"
  GaussianPolicy policy;
  std::optional<Mlpd> value;
  std::optional<AdamStated> policy_optim;
  std::optional<AdamVecStated> log_std_optim;
  std::optional<AdamStated> value_optim;
  std::optional<DdpgAgent> ddpg;  // actor/critic/targets + their optimizers
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace aced

#endif  // ACED_MATH_CHECKPOINT_HPP_
