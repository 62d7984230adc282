#include "aced/rl/gae.hpp"

namespace aced {

GaeResult compute_gae(const VectorXd& rewards, const VectorXd& values,
                      const std::vector<std::uint8_t>& dones, double bootstrap_value,
                      double gamma, double lambda) {
  const Eigen::Index n = rewards.size();
  if (values.size() != n || static_cast<Eigen::Index>(dones.size()) != n)
    throw ContractError("compute_gae: length mismatch");

  GaeResult out;
  out.advantages.resize(n);
  double gae = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double nonterminal = dones[t] ? 0.0 : 1.0;
    const double next_value = (t == n - 1) ? bootstrap_value : values(t + 1);
    const double delta = rewards(t) + gamma * next_value * nonterminal - values(t);
    gae = delta + gamma * lambda * nonterminal * gae;
    out.advantages(t) = gae;
  }
  out.returns = out.advantages + values;
  return out;
}

}  // namespace aced
