#include "aced/rl/ddpg.hpp"

#include <cmath>

#include "aced/rl/policy.hpp"

namespace aced {

DdpgAgent make_ddpg_agent(int obs_dim, int action_dim, const DdpgConfig& cfg, Rng& rng) {
  DdpgAgent a;
  std::vector<int> actor_dims = {obs_dim};
  actor_dims.insert(actor_dims.end(), kHiddenSizes.begin(), kHiddenSizes.end());
  actor_dims.push_back(action_dim);
  std::vector<int> critic_dims = {obs_dim + action_dim};
  critic_dims.insert(critic_dims.end(), kHiddenSizes.begin(), kHiddenSizes.end());
  critic_dims.push_back(1);

  a.actor = make_mlp<double>(actor_dims, rng, 0.01);
  a.critic = make_mlp<double>(critic_dims, rng, 0.01);
  a.actor_target = a.actor;
  a.critic_target = a.critic;
  a.actor_optim = make_adam(a.actor, cfg.lr);
  a.critic_optim = make_adam(a.critic, cfg.lr);
  return a;
}

VectorXd ddpg_action(const DdpgAgent& agent, const VectorXd& obs) {
  return mlp_forward(agent.actor, obs).array().tanh().matrix();
}

namespace {

MatrixXd critic_input(const MatrixXd& obs, const MatrixXd& act) {
  MatrixXd in(obs.rows() + act.rows(), obs.cols());
  in.topRows(obs.rows()) = obs;
  in.bottomRows(act.rows()) = act;
  return in;
}

}  // namespace

VectorXd ddpg_targets(const DdpgAgent& agent, const DdpgConfig& cfg,
                      const std::vector<const Transition*>& batch) {
  const int bsz = static_cast<int>(batch.size());
  const Eigen::Index obs_dim = agent.actor.input_dim();

  MatrixXd next_obs(obs_dim, bsz);
  for (int k = 0; k < bsz; ++k) next_obs.col(k) = batch[k]->next_obs;

  const MatrixXd next_act =
      mlp_forward_batch(agent.actor_target, next_obs).array().tanh().matrix();
  const MatrixXd q_next = mlp_forward_batch(agent.critic_target, critic_input(next_obs, next_act));

  VectorXd y(bsz);
  for (int k = 0; k < bsz; ++k) {
    const double nonterminal = batch[k]->done ? 0.0 : 1.0;
    y(k) = batch[k]->reward + cfg.gamma * nonterminal * q_next(0, k);
  }
  return y;
}

DdpgDiagnostics ddpg_update(ReplayBuffer& buffer, DdpgAgent& agent, const DdpgConfig& cfg,
                            Rng& rng) {
  DdpgDiagnostics diag;
  if (buffer.size() < static_cast<std::size_t>(cfg.batch_size)) {
    diag.skipped = true;
    return diag;
  }

  const int bsz = cfg.batch_size;
  std::vector<const Transition*> batch(bsz);
  for (int k = 0; k < bsz; ++k) batch[k] = &buffer.sample(rng);

  const Eigen::Index obs_dim = agent.actor.input_dim();
  const Eigen::Index act_dim = agent.actor.output_dim();
  MatrixXd obs(obs_dim, bsz), act(act_dim, bsz);
  for (int k = 0; k < bsz; ++k) {
    obs.col(k) = batch[k]->obs;
    act.col(k) = batch[k]->action;
  }

  // --- critic: regress Q(s, a) toward the bootstrap target ---
  const VectorXd y = ddpg_targets(agent, cfg, batch);
  MlpTraced ctrace;
  const MatrixXd q = mlp_forward_batch(agent.critic, critic_input(obs, act), &ctrace);
  const Eigen::RowVectorXd qdiff = q.row(0) - y.transpose();
  diag.critic_loss = qdiff.squaredNorm() / bsz;
  const MatrixXd d_q = (2.0 / bsz) * qdiff;
  const MlpGradd cgrad = mlp_backward_batch(agent.critic, ctrace, d_q);
  adam_step(agent.critic_optim, agent.critic, cgrad);

  // --- actor: ascend Q(s, tanh(actor(s))) ---
  MlpTraced atrace;
  const MatrixXd pre = mlp_forward_batch(agent.actor, obs, &atrace);
  const MatrixXd a_pi = pre.array().tanh().matrix();
  MlpTraced qtrace;
  const MatrixXd q_pi = mlp_forward_batch(agent.critic, critic_input(obs, a_pi), &qtrace);
  diag.actor_objective = q_pi.row(0).mean();

  // dQ/da via the critic input gradient, chained through the tanh squash.
  const MatrixXd up_q = MatrixXd::Constant(1, bsz, -1.0 / bsz);  // minimize -mean(Q)
  MatrixXd d_critic_in(obs_dim + act_dim, bsz);
  mlp_backward_batch(agent.critic, qtrace, up_q, &d_critic_in);
  const MatrixXd d_a = d_critic_in.bottomRows(act_dim);
  const MatrixXd d_pre = d_a.cwiseProduct((1.0 - a_pi.array().square()).matrix());
  const MlpGradd agrad = mlp_backward_batch(agent.actor, atrace, d_pre);
  adam_step(agent.actor_optim, agent.actor, agrad);

  // Hard target refresh on the period.
  if (++agent.updates % cfg.target_period == 0) {
    agent.actor_target = agent.actor;
    agent.critic_target = agent.critic;
  }
  return diag;
}

}  // namespace aced
