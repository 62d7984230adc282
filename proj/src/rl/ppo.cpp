#include "aced/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "aced/rl/gae.hpp"

namespace aced {

PpoOptimState make_ppo_optim(const GaussianPolicy& policy, const Mlpd& value,
                             const PpoConfig& cfg) {
  PpoOptimState s;
  s.policy_net = make_adam(policy.net, cfg.lr, cfg.grad_clip_norm);
  s.log_std = make_adam_vec(policy.log_std.size(), cfg.lr, cfg.grad_clip_norm);
  s.value_net = make_adam(value, cfg.lr, cfg.grad_clip_norm);
  return s;
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  return std::min(ratio * advantage,
                  std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantage);
}

PpoDiagnostics ppo_update(const RolloutBatch& batch, GaussianPolicy& policy, Mlpd& value,
                          PpoOptimState& optim, const PpoConfig& cfg, Rng& rng) {
  PpoDiagnostics diag;
  const int n = batch.size();
  if (n == 0) throw ContractError("ppo_update: empty batch");
  if (batch.observations.cols() != n || batch.actions.cols() != n ||
      static_cast<int>(batch.dones.size()) != n)
    throw ContractError("ppo_update: misaligned batch");

  const GaeResult gae =
      compute_gae(batch.rewards, batch.values, batch.dones, 0.0, cfg.gamma, cfg.lambda);

  // Whole-batch advantage normalization; essential with {0,1} rewards.
  VectorXd adv = gae.advantages;
  const double mean = adv.mean();
  const double sd = std::sqrt((adv.array() - mean).square().sum() / n);
  adv = (adv.array() - mean) / (sd + 1e-8);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);

  const Eigen::Index act_dim = policy.action_dim();
  int minibatches_done = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int start = 0; start < n; start += cfg.minibatch) {
      const int bsz = std::min(cfg.minibatch, n - start);

      MatrixXd X(batch.observations.rows(), bsz);
      MatrixXd A(act_dim, bsz);
      VectorXd mb_adv(bsz), mb_old_logp(bsz), mb_ret(bsz);
      for (int k = 0; k < bsz; ++k) {
        const int i = idx[start + k];
        X.col(k) = batch.observations.col(i);
        A.col(k) = batch.actions.col(i);
        mb_adv(k) = adv(i);
        mb_old_logp(k) = batch.log_probs(i);
        mb_ret(k) = gae.returns(i);
      }

      // --- policy ---
      MlpTraced trace;
      const MatrixXd MU = mlp_forward_batch(policy.net, X, &trace);
      const VectorXd inv_sigma = (-policy.log_std.array()).exp();
      const MatrixXd Z = (A - MU).array().colwise() * inv_sigma.array();
      const VectorXd logp = (-0.5 * Z.array().square().colwise().sum().transpose() -
                             policy.log_std.sum() - 0.5 * kLogTwoPi * double(act_dim))
                                .matrix();
      const VectorXd log_ratio = logp - mb_old_logp;
      const VectorXd ratio = log_ratio.array().min(30.0).max(-30.0).exp();

      double pg_loss = 0.0, kl = 0.0;
      int clipped = 0;
      VectorXd d_logp(bsz);  // d(policy loss)/d(logp_b)
      for (int k = 0; k < bsz; ++k) {
        const double r = ratio(k), a = mb_adv(k);
        const double surr1 = r * a;
        pg_loss -= clipped_surrogate(r, a, cfg.clip_eps);
        d_logp(k) = (surr1 <= clipped_surrogate(r, a, cfg.clip_eps) + 0.0) &&
                            (surr1 <= std::clamp(r, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * a)
                        ? -(r * a)
                        : 0.0;
        kl += (r - 1.0) - log_ratio(k);
        if (std::abs(r - 1.0) > cfg.clip_eps) ++clipped;
      }
      pg_loss /= bsz;
      d_logp /= double(bsz);

      const double entropy = gaussian_entropy(policy.log_std);
      const double loss_total = pg_loss - cfg.entropy_coef * entropy;
      if (!std::isfinite(loss_total)) {
        diag.aborted = true;
        return diag;
      }

      // Upstream into the mean head: d logp / d mu = (a - mu) / sigma^2.
      const VectorXd inv_var = (-2.0 * policy.log_std.array()).exp();
      MatrixXd d_mu = (A - MU).array().colwise() * inv_var.array();
      d_mu = d_mu.array().rowwise() * d_logp.transpose().array();

      // log-std gradient: d logp / d log_sigma_i = z_i^2 - 1 per sample.
      VectorXd d_log_std =
          ((Z.array().square() - 1.0).matrix() * d_logp) - VectorXd::Constant(act_dim, cfg.entropy_coef);

      const MlpGradd pgrad = mlp_backward_batch(policy.net, trace, d_mu);

      // --- value ---
      MlpTraced vtrace;
      const MatrixXd V = mlp_forward_batch(value, X, &vtrace);
      const Eigen::RowVectorXd vdiff = V.row(0) - mb_ret.transpose();
      const double v_loss = cfg.value_coef * vdiff.squaredNorm() / bsz;
      if (!std::isfinite(v_loss)) {
        diag.aborted = true;
        return diag;
      }
      const MatrixXd d_v = (2.0 * cfg.value_coef / bsz) * vdiff;
      const MlpGradd vgrad = mlp_backward_batch(value, vtrace, d_v);

      try {
        adam_step(optim.policy_net, policy.net, pgrad);
        adam_step(optim.log_std, policy.log_std, d_log_std);
        adam_step(optim.value_net, value, vgrad);
      } catch (const ContractError&) {
        diag.aborted = true;  // non-finite gradients slipped through
        return diag;
      }
      policy.log_std =
          policy.log_std.array().min(cfg.log_std_max).max(cfg.log_std_min).matrix();

      diag.policy_loss += pg_loss;
      diag.value_loss += v_loss;
      diag.approx_kl += kl / bsz;
      diag.clip_fraction += double(clipped) / bsz;
      diag.entropy = entropy;
      ++minibatches_done;
    }
  }

  if (minibatches_done > 0) {
    diag.policy_loss /= minibatches_done;
    diag.value_loss /= minibatches_done;
    diag.approx_kl /= minibatches_done;
    diag.clip_fraction /= minibatches_done;
  }
  return diag;
}

}  // namespace aced
