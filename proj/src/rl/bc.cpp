#include "aced/rl/bc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "aced/math/adam.hpp"
#include "aced/math/gaussian.hpp"

namespace aced {

BcReport bc_pretrain(const DemoSet& demos, const EnvSpec& spec, GaussianPolicy& policy,
                     const BcConfig& cfg, Rng& rng) {
  if (demos.trajectories.empty()) throw ContractError("bc_pretrain: empty demo set");
  if (!has_actions(demos))
    throw ContractError("bc_pretrain: demo set has states only; actions are required by BC");
  if (demos.spec_id != spec.id())
    throw ContractError("bc_pretrain: demo set was recorded for " + demos.spec_id +
                        ", not " + spec.id());

  // Flatten (state, action) pairs.
  std::vector<int> traj_of, step_of;
  for (int d = 0; d < demos.size(); ++d) {
    const Trajectory& t = demos.trajectories[d];
    for (int k = 0; k + 1 < t.length(); ++k) {
      traj_of.push_back(d);
      step_of.push_back(k);
    }
  }
  const int n = static_cast<int>(traj_of.size());
  MatrixXd X(spec.obs_dim(), n), A(EnvSpec::action_dim(), n);
  for (int i = 0; i < n; ++i) {
    const Trajectory& t = demos.trajectories[traj_of[i]];
    X.col(i) = observe(spec, t.states[step_of[i]]);
    const EnvAction& a = t.actions[step_of[i]];
    A.col(i) = Eigen::Vector3d(a.dx, a.dz, a.grip);
  }

  AdamStated optim = make_adam(policy.net, cfg.lr);
  const VectorXd inv_var = (-2.0 * policy.log_std.array()).exp();
  const double const_terms =
      policy.log_std.sum() + 0.5 * kLogTwoPi * double(policy.action_dim());

  BcReport report;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(idx.begin(), idx.end(), rng);
    double loss_sum = 0.0;
    for (int start = 0; start < n; start += cfg.minibatch) {
      const int bsz = std::min(cfg.minibatch, n - start);
      MatrixXd Xb(X.rows(), bsz), Ab(A.rows(), bsz);
      for (int k = 0; k < bsz; ++k) {
        Xb.col(k) = X.col(idx[start + k]);
        Ab.col(k) = A.col(idx[start + k]);
      }
      MlpTraced trace;
      const MatrixXd MU = mlp_forward_batch(policy.net, Xb, &trace);
      const MatrixXd diff = MU - Ab;
      // NLL = 0.5 * sum_i ((a-mu)/sigma)^2 + const; gradient w.r.t. mu is
      // (mu - a) / sigma^2.
      const double nll =
          0.5 * (diff.array().square().colwise() * inv_var.array()).sum() / bsz + const_terms;
      loss_sum += nll * bsz;
      MatrixXd upstream = (diff.array().colwise() * inv_var.array()) / double(bsz);
      const MlpGradd grad = mlp_backward_batch(policy.net, trace, upstream);
      adam_step(optim, policy.net, grad);
    }
    const double epoch_loss = loss_sum / n;
    report.epoch_losses.push_back(epoch_loss);
    ++report.epochs_run;

    if (epoch_loss < best - cfg.min_delta) {
      best = epoch_loss;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return report;
}

}  // namespace aced
