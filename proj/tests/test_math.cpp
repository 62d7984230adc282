#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "aced/math/adam.hpp"
#include "aced/math/checkpoint.hpp"
#include "aced/math/gaussian.hpp"
#include "aced/math/mlp.hpp"
#include "aced/rl/policy.hpp"

using namespace aced;

namespace {

// Independent forward-pass oracle: plain nested loops, no Eigen products.
std::vector<double> forward_oracle(const Mlpd& net, const std::vector<double>& input) {
  std::vector<double> a = input;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const auto& W = net.weights[l];
    std::vector<double> z(W.rows(), 0.0);
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      double acc = net.biases[l](r);
      for (Eigen::Index c = 0; c < W.cols(); ++c) acc += W(r, c) * a[c];
      z[r] = acc;
    }
    if (l + 1 < net.weights.size())
      for (double& v : z) v = std::tanh(v);
    a = std::move(z);
  }
  return a;
}

double objective(const Mlpd& net, const VectorXd& input, const VectorXd& upstream) {
  return upstream.dot(mlp_forward(net, input));
}

Mlpd random_net(Rng& rng, const std::vector<int>& dims) { return make_mlp<double>(dims, rng); }

}  // namespace

TEST_CASE("mlp forward: zero weights yield the bias") {
  Rng rng = make_rng(7);
  Mlpd net = random_net(rng, {4, 3, 2});
  for (auto& w : net.weights) w.setZero();
  net.biases[0] << 0.3, -0.1, 0.7;
  net.biases[1] << 1.5, -2.0;
  const VectorXd out = mlp_forward(net, VectorXd::Random(4));
  // hidden = tanh(bias0), output = W1*hidden + bias1 = bias1 since W1 = 0
  CHECK(out(0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(out(1) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("mlp forward: single linear layer w=2 b=0 maps 3 to 6") {
  Mlpd net;
  net.weights.push_back(MatrixXd::Constant(1, 1, 2.0));
  net.biases.push_back(VectorXd::Zero(1));
  VectorXd x(1);
  x << 3.0;
  CHECK(mlp_forward(net, x)(0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("mlp forward matches an independent loop oracle on random nets") {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Mlpd net = random_net(rng, {5, 8, 6, 3});
    VectorXd x = VectorXd::Random(5);
    const VectorXd got = mlp_forward(net, x);
    const std::vector<double> want = forward_oracle(net, {x.data(), x.data() + x.size()});
    for (int i = 0; i < 3; ++i) CHECK(got(i) == doctest::Approx(want[i]).epsilon(1e-13));
  }
}

TEST_CASE("mlp forward: fixed-seed spot value stays put") {
  Rng rng = make_rng(42);
  Mlpd net = random_net(rng, {3, 4, 2});
  VectorXd x(3);
  x << 0.25, -0.5, 1.0;
  const VectorXd out = mlp_forward(net, x);
  const std::vector<double> want = forward_oracle(net, {0.25, -0.5, 1.0});
  CHECK(out(0) == doctest::Approx(want[0]).epsilon(1e-14));
  CHECK(out(1) == doctest::Approx(want[1]).epsilon(1e-14));
}

TEST_CASE("mlp forward: dimension mismatch is a contract violation") {
  Rng rng = make_rng(3);
  Mlpd net = random_net(rng, {4, 3, 2});
  CHECK_THROWS_AS(mlp_forward(net, VectorXd::Random(5)), ContractError);
}

TEST_CASE("mlp determinism: identical inputs give bit-identical outputs") {
  Rng rng = make_rng(5);
  Mlpd net = random_net(rng, {6, 10, 4});
  const VectorXd x = VectorXd::Random(6);
  const VectorXd a = mlp_forward(net, x);
  const VectorXd b = mlp_forward(net, x);
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("mlp gradient: zero upstream gives all-zero gradients") {
  Rng rng = make_rng(11);
  Mlpd net = random_net(rng, {3, 5, 2});
  const MlpGradd g = mlp_gradient(net, VectorXd::Random(3), VectorXd::Zero(2));
  CHECK(squared_norm(g) == 0.0);
}

TEST_CASE("mlp gradient: single linear layer analytic case") {
  Mlpd net;
  net.weights.push_back(MatrixXd::Constant(1, 1, 0.8));
  net.biases.push_back(VectorXd::Zero(1));
  VectorXd x(1), up(1);
  x << 1.7;
  up << 1.0;
  VectorXd dx;
  const MlpGradd g = mlp_gradient(net, x, up, &dx);
  CHECK(g.d_weights[0](0, 0) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(g.d_biases[0](0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dx(0) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("mlp gradient: upstream shape mismatch throws") {
  Rng rng = make_rng(13);
  Mlpd net = random_net(rng, {3, 4, 2});
  CHECK_THROWS_AS(mlp_gradient(net, VectorXd::Random(3), VectorXd::Random(3)), ContractError);
}

static void check_gradients_fd(Mlpd& net, const VectorXd& x, const VectorXd& up) {
  const double h = 1e-5;
  const MlpGradd g = mlp_gradient(net, x, up);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < net.weights[l].size(); ++i) {
      double& p = net.weights[l].data()[i];
      const double orig = p;
      p = orig + h;
      const double fp = objective(net, x, up);
      p = orig - h;
      const double fm = objective(net, x, up);
      p = orig;
      const double fd = (fp - fm) / (2 * h);
      const double an = g.d_weights[l].data()[i];
      const double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
      CHECK(std::abs(fd - an) / denom <= 1e-4);
    }
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) {
      double& p = net.biases[l](i);
      const double orig = p;
      p = orig + h;
      const double fp = objective(net, x, up);
      p = orig - h;
      const double fm = objective(net, x, up);
      p = orig;
      const double fd = (fp - fm) / (2 * h);
      const double an = g.d_biases[l](i);
      const double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
      CHECK(std::abs(fd - an) / denom <= 1e-4);
    }
  }
}

TEST_CASE("mlp gradient matches central finite differences over random configurations") {
  Rng rng = make_rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int in = 1 + uniform_int(rng, 4);
    const int h1 = 1 + uniform_int(rng, 5);
    const int out = 1 + uniform_int(rng, 3);
    std::vector<int> dims = {in, h1, out};
    if (trial % 2 == 0) dims.insert(dims.begin() + 2, 1 + uniform_int(rng, 4));
    Mlpd net = random_net(rng, dims);
    const VectorXd x = VectorXd::Random(in);
    const VectorXd up = VectorXd::Random(out);
    check_gradients_fd(net, x, up);
  }
}

TEST_CASE("mlp input gradient matches finite differences") {
  Rng rng = make_rng(99);
  Mlpd net = random_net(rng, {4, 6, 3});
  VectorXd x = VectorXd::Random(4);
  const VectorXd up = VectorXd::Random(3);
  VectorXd dx;
  mlp_gradient(net, x, up, &dx);
  const double h = 1e-5;
  for (int i = 0; i < 4; ++i) {
    const double orig = x(i);
    x(i) = orig + h;
    const double fp = objective(net, x, up);
    x(i) = orig - h;
    const double fm = objective(net, x, up);
    x(i) = orig;
    const double fd = (fp - fm) / (2 * h);
    CHECK(dx(i) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("batched backward equals the sum of per-sample gradients") {
  Rng rng = make_rng(31);
  Mlpd net = random_net(rng, {4, 7, 2});
  const int B = 5;
  const MatrixXd X = MatrixXd::Random(4, B);
  const MatrixXd U = MatrixXd::Random(2, B);
  MlpTraced trace;
  mlp_forward_batch(net, X, &trace);
  const MlpGradd batch_g = mlp_backward_batch(net, trace, U);

  MlpGradd sum_g = zero_grad_like(net);
  for (int b = 0; b < B; ++b)
    accumulate(sum_g, mlp_gradient<double>(net, X.col(b), U.col(b)));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    CHECK((batch_g.d_weights[l] - sum_g.d_weights[l]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((batch_g.d_biases[l] - sum_g.d_biases[l]).cwiseAbs().maxCoeff() < 1e-12);
  }
}

// ---- Adam ----

TEST_CASE("adam: zero gradient leaves parameters and moments unchanged") {
  Rng rng = make_rng(21);
  Mlpd net = random_net(rng, {3, 4, 2});
  const Mlpd before = net;
  AdamStated st = make_adam(net, 1e-3);
  for (int k = 0; k < 7; ++k) adam_step(st, net, zero_grad_like(net));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    CHECK((net.weights[l].array() == before.weights[l].array()).all());
    CHECK((st.m.d_weights[l].array() == 0.0).all());
    CHECK((st.v.d_weights[l].array() == 0.0).all());
  }
  CHECK(st.step == 7);
}

TEST_CASE("adam: first step moves by ~lr against the gradient sign") {
  // Closed form: m_hat = g, v_hat = g^2, update = lr * g / (|g| + eps).
  Mlpd net;
  net.weights.push_back(MatrixXd::Constant(1, 1, 1.0));
  net.biases.push_back(VectorXd::Zero(1));
  AdamStated st = make_adam(net, 1e-3);
  MlpGradd g = zero_grad_like(net);
  g.d_weights[0](0, 0) = 0.37;
  adam_step(st, net, g);
  const double delta = net.weights[0](0, 0) - 1.0;
  CHECK(delta < 0.0);  // gradient positive, parameter decreases
  CHECK(std::abs(delta) == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("adam: global-norm clip rescales the gradient to the clip factor") {
  Mlpd net;
  net.weights.push_back(MatrixXd::Zero(2, 2));
  net.biases.push_back(VectorXd::Zero(2));
  AdamStated st = make_adam(net, 1.0, std::optional<double>(0.05));
  MlpGradd g = zero_grad_like(net);
  g.d_weights[0] << 6.0, 0.0, 0.0, 8.0;  // norm 10
  adam_step(st, net, g);
  // Moments were fed the clipped gradient: m = (1-beta1) * g * 0.005.
  const double norm_m = std::sqrt(squared_norm(st.m));
  CHECK(norm_m == doctest::Approx(0.1 * 0.05).epsilon(1e-12));
}

TEST_CASE("adam rejects non-finite gradients without touching parameters") {
  Rng rng = make_rng(23);
  Mlpd net = random_net(rng, {2, 3, 1});
  const Mlpd before = net;
  AdamStated st = make_adam(net, 1e-3);
  MlpGradd g = zero_grad_like(net);
  g.d_weights[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_step(st, net, g), ContractError);
  CHECK((net.weights[0].array() == before.weights[0].array()).all());
  CHECK(st.step == 0);
}

TEST_CASE("adam converges on a quadratic") {
  Mlpd net;
  net.weights.push_back(MatrixXd::Constant(1, 1, 5.0));
  net.biases.push_back(VectorXd::Zero(1));
  AdamStated st = make_adam(net, 0.05);
  for (int k = 0; k < 2000; ++k) {
    MlpGradd g = zero_grad_like(net);
    g.d_weights[0](0, 0) = 2.0 * (net.weights[0](0, 0) - 1.5);
    adam_step(st, net, g);
  }
  CHECK(net.weights[0](0, 0) == doctest::Approx(1.5).epsilon(1e-4));
}

// ---- Gaussian ----

TEST_CASE("gaussian log-prob at the mode: -sum(log_std) - d/2 log(2pi)") {
  VectorXd mean(3), log_std(3);
  mean << 0.1, -0.4, 2.0;
  log_std << -0.7, 0.2, 0.0;
  const double got = gaussian_log_prob(mean, log_std, mean);
  const double want = -log_std.sum() - 1.5 * std::log(2 * M_PI);
  CHECK(got == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("gaussian log-prob symmetry about the mean") {
  VectorXd mean(2), log_std(2), delta(2);
  mean << 0.5, -1.0;
  log_std << -0.3, 0.4;
  delta << 0.17, -0.45;
  CHECK(gaussian_log_prob<double>(mean, log_std, mean + delta) ==
        doctest::Approx(gaussian_log_prob<double>(mean, log_std, mean - delta)).epsilon(1e-14));
}

TEST_CASE("gaussian log-prob matches a direct density evaluation") {
  Rng rng = make_rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + uniform_int(rng, 4);
    VectorXd mean(d), log_std(d), a(d);
    for (int i = 0; i < d; ++i) {
      mean(i) = uniform(rng, -2, 2);
      log_std(i) = uniform(rng, -1.5, 0.5);
      a(i) = uniform(rng, -3, 3);
    }
    double direct = 0.0;
    for (int i = 0; i < d; ++i) {
      const double sigma = std::exp(log_std(i));
      const double z = (a(i) - mean(i)) / sigma;
      direct += -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2 * M_PI);
    }
    CHECK(std::abs(gaussian_log_prob(mean, log_std, a) - direct) < 1e-12);
  }
}

TEST_CASE("gaussian 1-D density integrates to ~1 on a grid") {
  VectorXd mean(1), log_std(1);
  mean << 0.3;
  log_std << std::log(0.5);
  const double sigma = 0.5;
  const int n = 20000;
  const double lo = mean(0) - 8 * sigma, hi = mean(0) + 8 * sigma;
  const double dx = (hi - lo) / n;
  double integral = 0.0;
  VectorXd a(1);
  for (int i = 0; i <= n; ++i) {
    a(0) = lo + i * dx;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    integral += w * std::exp(gaussian_log_prob(mean, log_std, a)) * dx;
  }
  CHECK(std::abs(integral - 1.0) <= 1e-3);
}

TEST_CASE("gaussian log-prob gradients match finite differences") {
  VectorXd mean(2), log_std(2), a(2);
  mean << 0.2, -0.7;
  log_std << -0.5, 0.1;
  a << 0.9, -1.2;
  const VectorXd gm = gaussian_log_prob_grad_mean(mean, log_std, a);
  const VectorXd gs = gaussian_log_prob_grad_log_std(mean, log_std, a);
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    VectorXd mp = mean, mm = mean;
    mp(i) += h;
    mm(i) -= h;
    const double fd =
        (gaussian_log_prob(mp, log_std, a) - gaussian_log_prob(mm, log_std, a)) / (2 * h);
    CHECK(gm(i) == doctest::Approx(fd).epsilon(1e-6));
    VectorXd sp = log_std, sm = log_std;
    sp(i) += h;
    sm(i) -= h;
    const double fds =
        (gaussian_log_prob(mean, sp, a) - gaussian_log_prob(mean, sm, a)) / (2 * h);
    CHECK(gs(i) == doctest::Approx(fds).epsilon(1e-6));
  }
}

// ---- checkpoint round trip ----

TEST_CASE("checkpoint: policy and optimizer state survive a round trip exactly") {
  Rng rng = make_rng(77);
  GaussianPolicy p = make_gaussian_policy(8, 3, rng);
  Mlpd v = make_value_net(8, rng);
  AdamStated opt = make_adam(p.net, 2e-4, std::optional<double>(0.05));
  MlpGradd g = zero_grad_like(p.net);
  g.d_weights[0].setConstant(0.01);
  adam_step(opt, p.net, g);

  Checkpoint ck;
  ck.spec_id = "pickplace-v1";
  ck.algo = "ppo";
  ck.policy = p;
  ck.value = v;
  ck.policy_optim = opt;

  const auto path = std::filesystem::temp_directory_path() / "aced_test_ckpt.json";
  save_checkpoint(ck, path);
  const Checkpoint back = load_checkpoint(path);
  CHECK(back.spec_id == "pickplace-v1");
  CHECK(back.algo == "ppo");
  CHECK((back.policy.net.weights[0].array() == p.net.weights[0].array()).all());
  CHECK((back.policy.log_std.array() == p.log_std.array()).all());
  REQUIRE(back.value.has_value());
  CHECK((back.value->weights[2].array() == v.weights[2].array()).all());
  REQUIRE(back.policy_optim.has_value());
  CHECK(back.policy_optim->step == 1);
  CHECK((back.policy_optim->m.d_weights[0].array() == opt.m.d_weights[0].array()).all());
  CHECK(back.policy_optim->clip_norm == opt.clip_norm);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint: truncated file is a parse error") {
  const auto path = std::filesystem::temp_directory_path() / "aced_test_bad_ckpt.json";
  std::ofstream(path) << "{\"version\": 1, \"kind\": \"checkpo";
  CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  std::filesystem::remove(path);
}
