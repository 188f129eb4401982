// Copyright 2026 The Kinolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policy.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinolab::trainer {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // ln(2 pi)
}

Policy::Policy(const PolicyConfig& cfg, Rng& rng) : config(cfg) {
  actor = Mlp(cfg.obs_dim, cfg.actor_hidden, cfg.action_dim);
  critic = Mlp(cfg.priv_dim, cfg.critic_hidden, 1);
  actor.init(rng, cfg.actor_final_scale);
  critic.init(rng, 1.0);
  log_std = Eigen::RowVectorXd::Constant(cfg.action_dim, cfg.init_log_std);
}

std::pair<Eigen::VectorXd, double> Policy::act(const Eigen::VectorXd& obs,
                                               Rng& rng,
                                               bool deterministic) const {
  if (obs.size() != config.obs_dim) {
    throw InvalidInput("act: observation dimension mismatch");
  }
  const Eigen::RowVectorXd mean = actor.forward(obs.transpose());
  Eigen::VectorXd action(config.action_dim);
  double logp = 0.0;
  for (int j = 0; j < config.action_dim; ++j) {
    const double sigma = std::exp(log_std[j]);
    const double eps = deterministic ? 0.0 : rng.normal();
    action[j] = mean[j] + sigma * eps;
    const double z = (action[j] - mean[j]) / sigma;
    logp += -0.5 * z * z - log_std[j] - 0.5 * kLog2Pi;
  }
  return {action, logp};
}

Eigen::VectorXd Policy::log_prob(const Eigen::MatrixXd& mean,
                                 const Eigen::MatrixXd& actions) const {
  if (mean.rows() != actions.rows() || mean.cols() != actions.cols()) {
    throw InvalidInput("log_prob: shape mismatch");
  }
  const int n = static_cast<int>(mean.rows());
  const int a = static_cast<int>(mean.cols());
  Eigen::VectorXd out(n);
  double log_std_sum = log_std.sum();
  for (int i = 0; i < n; ++i) {
    double quad = 0.0;
    for (int j = 0; j < a; ++j) {
      const double z = (actions(i, j) - mean(i, j)) * std::exp(-log_std[j]);
      quad += z * z;
    }
    out[i] = -0.5 * quad - log_std_sum - 0.5 * a * kLog2Pi;
  }
  return out;
}

double Policy::entropy() const {
  // 0.5 * ln(2 pi e) per dimension plus the log stddevs.
  return log_std.sum() + 0.5 * config.action_dim * (kLog2Pi + 1.0);
}

std::vector<Eigen::Map<Eigen::VectorXd>> Policy::parameter_views() {
  std::vector<Eigen::Map<Eigen::VectorXd>> views;
  for (Mlp* net : {&actor, &critic}) {
    for (auto& w : net->weights()) views.emplace_back(w.data(), w.size());
    for (auto& b : net->biases()) views.emplace_back(b.data(), b.size());
  }
  views.emplace_back(log_std.data(), log_std.size());
  return views;
}

int Policy::num_params() {
  int n = 0;
  for (const auto& v : parameter_views()) n += static_cast<int>(v.size());
  return n;
}

void Policy::clamp_log_std() {
  for (int j = 0; j < log_std.size(); ++j) {
    log_std[j] = std::max(log_std[j], config.min_log_std);
  }
}

RunningNormalizer::RunningNormalizer(int dim, bool enabled)
    : mean_(Eigen::VectorXd::Zero(dim)),
      m2_(Eigen::VectorXd::Ones(dim)),
      count_(1.0),
      enabled_(enabled) {}

void RunningNormalizer::update(const double* x) {
  if (!enabled_) return;
  count_ += 1.0;
  for (int i = 0; i < mean_.size(); ++i) {
    const double delta = x[i] - mean_[i];
    mean_[i] += delta / count_;
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

void RunningNormalizer::normalize(const double* in, double* out) const {
  if (!enabled_) {
    for (int i = 0; i < mean_.size(); ++i) out[i] = in[i];
    return;
  }
  for (int i = 0; i < mean_.size(); ++i) {
    const double var = m2_[i] / count_;
    double v = (in[i] - mean_[i]) / std::sqrt(var + 1e-8);
    out[i] = std::clamp(v, -10.0, 10.0);
  }
}

}  // namespace kinolab::trainer
