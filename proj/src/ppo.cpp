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

#include "ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace kinolab::trainer {

std::pair<Eigen::VectorXd, Eigen::VectorXd> compute_gae(
    const RolloutBatch& batch, double discount, double gae_lambda) {
  const int T = batch.horizon;
  const int N = batch.num_envs;
  Eigen::VectorXd advantages = Eigen::VectorXd::Zero(T * N);
  Eigen::VectorXd returns = Eigen::VectorXd::Zero(T * N);
  for (int e = 0; e < N; ++e) {
    double gae = 0.0;
    for (int t = T - 1; t >= 0; --t) {
      const int idx = t * N + e;
      const double not_done = 1.0 - batch.dones[idx];
      const double next_value =
          t + 1 < T ? batch.values[(t + 1) * N + e] : batch.bootstrap_values[e];
      const double delta = batch.rewards[idx] +
                           discount * next_value * not_done -
                           batch.values[idx];
      gae = delta + discount * gae_lambda * not_done * gae;
      advantages[idx] = gae;
      returns[idx] = gae + batch.values[idx];
    }
  }
  return {advantages, returns};
}

void normalize_advantages(Eigen::VectorXd& advantages,
                          const Eigen::VectorXd& valid) {
  const double n = valid.sum();
  if (n < 2.0) return;
  const double mean = advantages.dot(valid) / n;
  double var = 0.0;
  for (int i = 0; i < advantages.size(); ++i) {
    if (valid[i] > 0.0) {
      const double d = advantages[i] - mean;
      var += d * d;
    }
  }
  var /= n;
  const double stddev = std::sqrt(var + 1e-8);
  for (int i = 0; i < advantages.size(); ++i) {
    advantages[i] = (advantages[i] - mean) / stddev;
  }
}

MinibatchResult ppo_minibatch(Policy& policy, const RolloutBatch& batch,
                              const Eigen::VectorXd& advantages,
                              const Eigen::VectorXd& returns,
                              const std::vector<int>& rows,
                              const PpoConfig& config,
                              Mlp::Grads* actor_grads, Mlp::Grads* critic_grads,
                              Eigen::RowVectorXd* log_std_grad) {
  const int m = static_cast<int>(rows.size());
  const int a_dim = policy.config.action_dim;

  RowMatrix obs(m, batch.obs.cols());
  RowMatrix priv(m, batch.priv.cols());
  RowMatrix actions(m, a_dim);
  Eigen::VectorXd old_logp(m), adv(m), ret(m), valid(m);
  for (int i = 0; i < m; ++i) {
    const int r = rows[i];
    obs.row(i) = batch.obs.row(r);
    priv.row(i) = batch.priv.row(r);
    actions.row(i) = batch.actions.row(r);
    old_logp[i] = batch.log_probs[r];
    adv[i] = advantages[r];
    ret[i] = returns[r];
    valid[i] = batch.valid[r];
  }
  const double n_valid = std::max(valid.sum(), 1.0);

  Mlp::Cache actor_cache, critic_cache;
  const Eigen::MatrixXd mean = policy.actor.forward(obs, actor_cache);
  const Eigen::VectorXd logp = policy.log_prob(mean, actions);
  const Eigen::VectorXd value = policy.critic.forward(priv, critic_cache).col(0);

  MinibatchResult result;
  Eigen::VectorXd dl_dlogp = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd dl_dvalue = Eigen::VectorXd::Zero(m);

  const double eps = config.clip_ratio;
  for (int i = 0; i < m; ++i) {
    if (valid[i] == 0.0) continue;
    const double ratio = std::exp(logp[i] - old_logp[i]);
    const double unclipped = ratio * adv[i];
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * adv[i];
    result.policy_loss += -std::min(unclipped, clipped) / n_valid;
    if (unclipped <= clipped) {
      dl_dlogp[i] = -adv[i] * ratio / n_valid;
    }
    const double verr = value[i] - ret[i];
    result.value_loss += 0.5 * verr * verr / n_valid;
    dl_dvalue[i] = config.value_coeff * verr / n_valid;
    result.approx_kl += (old_logp[i] - logp[i]) / n_valid;
    if (std::abs(ratio - 1.0) > eps) result.clip_fraction += 1.0 / n_valid;
  }
  result.entropy = policy.entropy();
  result.total_loss = result.policy_loss + config.value_coeff * result.value_loss -
                      config.entropy_coeff * result.entropy;

  if (actor_grads != nullptr) {
    // d logp / d mean_j = (a_j - mu_j) / sigma_j^2
    Eigen::MatrixXd dmean(m, a_dim);
    Eigen::RowVectorXd dls = Eigen::RowVectorXd::Zero(a_dim);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < a_dim; ++j) {
        const double inv_var = std::exp(-2.0 * policy.log_std[j]);
        const double diff = actions(i, j) - mean(i, j);
        dmean(i, j) = dl_dlogp[i] * diff * inv_var;
        // d logp / d log_std_j = diff^2 / sigma_j^2 - 1
        dls[j] += dl_dlogp[i] * (diff * diff * inv_var - 1.0);
      }
    }
    // Entropy depends on log_std alone: d entropy / d log_std_j = 1.
    dls.array() -= config.entropy_coeff;
    policy.actor.backward(actor_cache, dmean, *actor_grads);
    if (log_std_grad != nullptr) *log_std_grad += dls;
  }
  if (critic_grads != nullptr) {
    policy.critic.backward(critic_cache, dl_dvalue, *critic_grads);
  }
  return result;
}

namespace {

double global_grad_norm(const Mlp::Grads& a, const Mlp::Grads& c,
                        const Eigen::RowVectorXd& ls) {
  double sq = 0.0;
  for (const auto& w : a.weights) sq += w.squaredNorm();
  for (const auto& b : a.biases) sq += b.squaredNorm();
  for (const auto& w : c.weights) sq += w.squaredNorm();
  for (const auto& b : c.biases) sq += b.squaredNorm();
  sq += ls.squaredNorm();
  return std::sqrt(sq);
}

void scale_grads(Mlp::Grads& a, Mlp::Grads& c, Eigen::RowVectorXd& ls,
                 double s) {
  for (auto& w : a.weights) w *= s;
  for (auto& b : a.biases) b *= s;
  for (auto& w : c.weights) w *= s;
  for (auto& b : c.biases) b *= s;
  ls *= s;
}

}  // namespace

UpdateStats ppo_update(Policy& policy, Adam& adam, const RolloutBatch& batch,
                       const Eigen::VectorXd& advantages,
                       const Eigen::VectorXd& returns, const PpoConfig& config,
                       Rng& rng) {
  const int n = batch.size();
  if (config.minibatch_size <= 0 || n % config.minibatch_size != 0) {
    throw ConfigError("ppo_update: minibatch_size must divide the batch size");
  }
  const int num_minibatches = n / config.minibatch_size;

  UpdateStats stats;
  int updates = 0;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the trainer rng; deterministic given the seed.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.integer(i + 1));
      std::swap(order[i], order[j]);
    }
    for (int mb = 0; mb < num_minibatches; ++mb) {
      std::vector<int> rows(order.begin() + mb * config.minibatch_size,
                            order.begin() + (mb + 1) * config.minibatch_size);
      Mlp::Grads actor_grads = policy.actor.make_grads();
      Mlp::Grads critic_grads = policy.critic.make_grads();
      Eigen::RowVectorXd log_std_grad =
          Eigen::RowVectorXd::Zero(policy.config.action_dim);

      const MinibatchResult r =
          ppo_minibatch(policy, batch, advantages, returns, rows, config,
                        &actor_grads, &critic_grads, &log_std_grad);
      if (!std::isfinite(r.total_loss)) {
        stats.aborted = true;
        return stats;
      }

      if (config.max_grad_norm > 0.0) {
        const double norm =
            global_grad_norm(actor_grads, critic_grads, log_std_grad);
        if (norm > config.max_grad_norm) {
          scale_grads(actor_grads, critic_grads, log_std_grad,
                      config.max_grad_norm / norm);
        }
      }

      std::vector<Eigen::Map<Eigen::VectorXd>> params = policy.parameter_views();
      std::vector<Eigen::Map<const Eigen::VectorXd>> grads;
      for (auto& w : actor_grads.weights) grads.emplace_back(w.data(), w.size());
      for (auto& b : actor_grads.biases) grads.emplace_back(b.data(), b.size());
      for (auto& w : critic_grads.weights) grads.emplace_back(w.data(), w.size());
      for (auto& b : critic_grads.biases) grads.emplace_back(b.data(), b.size());
      grads.emplace_back(log_std_grad.data(), log_std_grad.size());
      adam.step(params, grads, config.learning_rate);
      policy.clamp_log_std();

      stats.policy_loss += r.policy_loss;
      stats.value_loss += r.value_loss;
      stats.entropy += r.entropy;
      stats.approx_kl += r.approx_kl;
      stats.clip_fraction += r.clip_fraction;
      ++updates;
    }
  }
  if (updates > 0) {
    stats.policy_loss /= updates;
    stats.value_loss /= updates;
    stats.entropy /= updates;
    stats.approx_kl /= updates;
    stats.clip_fraction /= updates;
  }
  return stats;
}

void collect_rollouts(VectorEnv& envs, const Policy& policy,
                      RunningNormalizer& obs_norm, RunningNormalizer& priv_norm,
                      int horizon, Rng& rng, RolloutBatch& batch) {
  const int N = envs.num_envs();
  const int obs_dim = envs.obs_dim();
  const int priv_dim = envs.priv_dim();
  const int a_dim = envs.action_dim();

  batch.horizon = horizon;
  batch.num_envs = N;
  batch.obs.resize(horizon * N, obs_dim);
  batch.priv.resize(horizon * N, priv_dim);
  batch.actions.resize(horizon * N, a_dim);
  batch.log_probs.resize(horizon * N);
  batch.rewards.resize(horizon * N);
  batch.values.resize(horizon * N);
  batch.dones.resize(horizon * N);
  batch.valid = Eigen::VectorXd::Ones(horizon * N);
  batch.kinds.assign(horizon * N, StepKind::kRunning);
  batch.bootstrap_values.resize(N);

  RowMatrix raw_obs(N, obs_dim), raw_priv(N, priv_dim);
  RowMatrix norm_obs(N, obs_dim), norm_priv(N, priv_dim);
  RowMatrix actions(N, a_dim);
  VectorEnv::StepOut out;

  // Per-env accumulators for episode statistics and fault masking.
  std::vector<int> episode_start(N, 0);
  std::vector<double> episode_return(N, 0.0);
  std::vector<int> episode_len(N, 0);
  double return_sum = 0.0;
  double len_sum = 0.0;
  double tracking_sum = 0.0;
  int tracking_count = 0;
  batch.episodes_finished = 0;
  batch.falls = 0;
  batch.faults = 0;

  for (int t = 0; t < horizon; ++t) {
    envs.observe(raw_obs, raw_priv);
    for (int e = 0; e < N; ++e) {
      obs_norm.update(raw_obs.row(e).data());
      priv_norm.update(raw_priv.row(e).data());
      obs_norm.normalize(raw_obs.row(e).data(), norm_obs.row(e).data());
      priv_norm.normalize(raw_priv.row(e).data(), norm_priv.row(e).data());
    }

    const Eigen::MatrixXd mean = policy.actor_mean(norm_obs);
    for (int e = 0; e < N; ++e) {
      for (int j = 0; j < a_dim; ++j) {
        actions(e, j) = mean(e, j) + std::exp(policy.log_std[j]) * rng.normal();
      }
    }
    const Eigen::VectorXd logp = policy.log_prob(mean, actions);
    const Eigen::VectorXd values = policy.values(norm_priv);

    envs.step(actions, out);

    for (int e = 0; e < N; ++e) {
      const int idx = t * N + e;
      batch.obs.row(idx) = norm_obs.row(e);
      batch.priv.row(idx) = norm_priv.row(e);
      batch.actions.row(idx) = actions.row(e);
      batch.log_probs[idx] = logp[e];
      batch.values[idx] = values[e];
      batch.rewards[idx] = out.reward[e];
      batch.dones[idx] = out.done[e] ? 1.0 : 0.0;
      batch.kinds[idx] = out.kind[e];

      episode_return[e] += out.reward[e];
      episode_len[e] += 1;
      tracking_sum += out.tracking[e];
      ++tracking_count;

      if (out.kind[e] == StepKind::kFault) {
        // Drop the whole episode from the batch.
        batch.faults += 1;
        for (int k = episode_start[e]; k <= t; ++k) {
          batch.valid[k * N + e] = 0.0;
        }
      }
      if (out.done[e]) {
        if (out.kind[e] != StepKind::kFault) {
          batch.episodes_finished += 1;
          return_sum += episode_return[e];
          len_sum += episode_len[e];
          if (out.kind[e] == StepKind::kFell) batch.falls += 1;
        }
        episode_return[e] = 0.0;
        episode_len[e] = 0;
        episode_start[e] = t + 1;
      }
    }
  }

  envs.observe(raw_obs, raw_priv);
  for (int e = 0; e < N; ++e) {
    priv_norm.normalize(raw_priv.row(e).data(), norm_priv.row(e).data());
  }
  batch.bootstrap_values = policy.values(norm_priv);

  batch.mean_tracking = tracking_count > 0 ? tracking_sum / tracking_count : 0.0;
  batch.mean_episode_return =
      batch.episodes_finished > 0 ? return_sum / batch.episodes_finished : 0.0;
  batch.mean_episode_length =
      batch.episodes_finished > 0 ? len_sum / batch.episodes_finished : 0.0;
}

}  // namespace kinolab::trainer
