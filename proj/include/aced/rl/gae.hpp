#ifndef ACED_RL_GAE_HPP_
#define ACED_RL_GAE_HPP_

#include <cstdint>
#include <vector>

#include "aced/types.hpp"

namespace aced {

struct GaeResult {
  VectorXd advantages;
  VectorXd returns;  // advantages + values
};

// Generalized advantage estimation over a step sequence that may span several
// episodes (done flags mark boundaries). bootstrap_value is the value of the
// state following the last step and is only used if the sequence does not end
// with done; terminal steps bootstrap with zero.
GaeResult compute_gae(const VectorXd& rewards, const VectorXd& values,
                      const std::vector<std::uint8_t>& dones, double bootstrap_value,
                      double gamma, double lambda);

}  // namespace aced

#endif  // ACED_RL_GAE_HPP_
