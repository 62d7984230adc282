#include "aced/math/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace aced {

namespace {

using nlohmann::json;

json matrix_to_json(const MatrixXd& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data(m.data(), m.data() + m.size());  // column-major
  j["data"] = std::move(data);
  return j;
}

MatrixXd matrix_from_json(const json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ParseError("checkpoint: matrix payload size mismatch");
  MatrixXd m(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

json vector_to_json(const VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

VectorXd vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(data.data(), data.size());
}

json mlp_to_json(const Mlpd& net) {
  json layers = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    json layer;
    layer["w"] = matrix_to_json(net.weights[l]);
    layer["b"] = vector_to_json(net.biases[l]);
    layers.push_back(std::move(layer));
  }
  return layers;
}

Mlpd mlp_from_json(const json& j) {
  Mlpd net;
  for (const auto& layer : j) {
    net.weights.push_back(matrix_from_json(layer.at("w")));
    net.biases.push_back(vector_from_json(layer.at("b")));
  }
  if (net.weights.empty()) throw ParseError("checkpoint: empty layer list");
  return net;
}

json grad_to_json(const MlpGradd& g) {
  json layers = json::array();
  for (std::size_t l = 0; l < g.d_weights.size(); ++l) {
    json layer;
    layer["w"] = matrix_to_json(g.d_weights[l]);
    layer["b"] = vector_to_json(g.d_biases[l]);
    layers.push_back(std::move(layer));
  }
  return layers;
}

MlpGradd grad_from_json(const json& j) {
  MlpGradd g;
  for (const auto& layer : j) {
    g.d_weights.push_back(matrix_from_json(layer.at("w")));
    g.d_biases.push_back(vector_from_json(layer.at("b")));
  }
  return g;
}

json adam_to_json(const AdamStated& s) {
  json j;
  j["m"] = grad_to_json(s.m);
  j["v"] = grad_to_json(s.v);
  j["step"] = s.step;
  j["lr"] = s.lr;
  j["beta1"] = s.beta1;
  j["beta2"] = s.beta2;
  j["eps"] = s.eps;
  if (s.clip_norm) j["clip_norm"] = *s.clip_norm;
  return j;
}

AdamStated adam_from_json(const json& j) {
  AdamStated s;
  s.m = grad_from_json(j.at("m"));
  s.v = grad_from_json(j.at("v"));
  s.step = j.at("step").get<long>();
  s.lr = j.at("lr").get<double>();
  s.beta1 = j.at("beta1").get<double>();
  s.beta2 = j.at("beta2").get<double>();
  s.eps = j.at("eps").get<double>();
  if (j.contains("clip_norm")) s.clip_norm = j.at("clip_norm").get<double>();
  return s;
}

json adam_vec_to_json(const AdamVecStated& s) {
  json j;
  j["m"] = vector_to_json(s.m);
  j["v"] = vector_to_json(s.v);
  j["step"] = s.step;
  j["lr"] = s.lr;
  j["beta1"] = s.beta1;
  j["beta2"] = s.beta2;
  j["eps"] = s.eps;
  if (s.clip_norm) j["clip_norm"] = *s.clip_norm;
  return j;
}

AdamVecStated adam_vec_from_json(const json& j) {
  AdamVecStated s;
  s.m = vector_from_json(j.at("m"));
  s.v = vector_from_json(j.at("v"));
  s.step = j.at("step").get<long>();
  s.lr = j.at("lr").get<double>();
  s.beta1 = j.at("beta1").get<double>();
  s.beta2 = j.at("beta2").get<double>();
  s.eps = j.at("eps").get<double>();
  if (j.contains("clip_norm")) s.clip_norm = j.at("clip_norm").get<double>();
  return s;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  json j;
  j["version"] = 1;
  j["kind"] = "checkpoint";
  j["spec_id"] = ckpt.spec_id;
  j["algo"] = ckpt.algo;
  j["policy"]["net"] = mlp_to_json(ckpt.policy.net);
  j["policy"]["log_std"] = vector_to_json(ckpt.policy.log_std);
  if (ckpt.value) j["value"] = mlp_to_json(*ckpt.value);
  if (ckpt.policy_optim) j["policy_optim"] = adam_to_json(*ckpt.policy_optim);
  if (ckpt.log_std_optim) j["log_std_optim"] = adam_vec_to_json(*ckpt.log_std_optim);
  if (ckpt.value_optim) j["value_optim"] = adam_to_json(*ckpt.value_optim);
  if (ckpt.ddpg) {
    const DdpgAgent& a = *ckpt.ddpg;
    j["ddpg"]["actor"] = mlp_to_json(a.actor);
    j["ddpg"]["critic"] = mlp_to_json(a.critic);
    j["ddpg"]["actor_target"] = mlp_to_json(a.actor_target);
    j["ddpg"]["critic_target"] = mlp_to_json(a.critic_target);
    j["ddpg"]["actor_optim"] = adam_to_json(a.actor_optim);
    j["ddpg"]["critic_optim"] = adam_to_json(a.critic_optim);
    j["ddpg"]["updates"] = a.updates;
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path.string());
  out << j.dump();
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad checkpoint: ") + e.what());
  }

  try {
    if (j.at("version").get<int>() != 1) throw ParseError("unsupported checkpoint version");
    if (j.at("kind").get<std::string>() != "checkpoint")
      throw ParseError("not a checkpoint file");
    Checkpoint c;
    c.spec_id = j.at("spec_id").get<std::string>();
    c.algo = j.at("algo").get<std::string>();
    c.policy.net = mlp_from_json(j.at("policy").at("net"));
    c.policy.log_std = vector_from_json(j.at("policy").at("log_std"));
    if (j.contains("value")) c.value = mlp_from_json(j.at("value"));
    if (j.contains("policy_optim")) c.policy_optim = adam_from_json(j.at("policy_optim"));
    if (j.contains("log_std_optim"))
      c.log_std_optim = adam_vec_from_json(j.at("log_std_optim"));
    if (j.contains("value_optim")) c.value_optim = adam_from_json(j.at("value_optim"));
    if (j.contains("ddpg")) {
      DdpgAgent a;
      a.actor = mlp_from_json(j.at("ddpg").at("actor"));
      a.critic = mlp_from_json(j.at("ddpg").at("critic"));
      a.actor_target = mlp_from_json(j.at("ddpg").at("actor_target"));
      a.critic_target = mlp_from_json(j.at("ddpg").at("critic_target"));
      a.actor_optim = adam_from_json(j.at("ddpg").at("actor_optim"));
      a.critic_optim = adam_from_json(j.at("ddpg").at("critic_optim"));
      a.updates = j.at("ddpg").at("updates").get<long>();
      c.ddpg = std::move(a);
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad checkpoint: ") + e.what());
  }
}

}  // namespace aced
