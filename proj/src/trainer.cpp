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

#include "trainer.hpp"

#include <cmath>
#include <filesystem>
#include <memory>

#include "errors.hpp"
#include "rewards.hpp"

namespace kinolab::trainer {

void TrainerConfig::validate() const {
  if (!(discount > 0.0 && discount < 1.0)) {
    throw ConfigError("trainer: discount must be in (0, 1)");
  }
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) {
    throw ConfigError("trainer: gae_lambda must be in [0, 1]");
  }
  if (num_envs < 1 || horizon < 1) {
    throw ConfigError("trainer: num_envs and horizon must be positive");
  }
  if (minibatch_size <= 0 || (num_envs * horizon) % minibatch_size != 0) {
    throw ConfigError(
        "trainer: minibatch_size must divide num_envs * horizon");
  }
  if (epochs < 1) throw ConfigError("trainer: epochs must be >= 1");
  if (max_iterations < 0) {
    throw ConfigError("trainer: max_iterations must be >= 0");
  }
  if (!(learning_rate > 0.0) || !(clip_ratio > 0.0)) {
    throw ConfigError("trainer: learning_rate and clip_ratio must be positive");
  }
}

PpoConfig TrainerConfig::ppo() const {
  PpoConfig p;
  p.discount = discount;
  p.gae_lambda = gae_lambda;
  p.clip_ratio = clip_ratio;
  p.entropy_coeff = entropy_coeff;
  p.value_coeff = value_coeff;
  p.learning_rate = learning_rate;
  p.max_grad_norm = max_grad_norm;
  p.epochs = epochs;
  p.minibatch_size = minibatch_size;
  p.normalize_advantages = normalize_advantages;
  return p;
}

std::vector<std::string> metrics_columns() {
  return {"iteration",    "total_steps",   "mean_tracking",
          "gate_fired",   "v_max",         "cycle_time",
          "mean_return",  "mean_ep_len",   "episodes",
          "falls",        "faults",        "policy_loss",
          "value_loss",   "entropy",       "approx_kl",
          "clip_fraction"};
}

std::vector<double> metrics_values(const IterationRow& r) {
  return {static_cast<double>(r.iteration),
          static_cast<double>(r.total_steps),
          r.mean_tracking,
          r.gate_fired ? 1.0 : 0.0,
          r.v_max,
          r.cycle_time,
          r.mean_episode_return,
          r.mean_episode_length,
          static_cast<double>(r.episodes),
          static_cast<double>(r.falls),
          static_cast<double>(r.faults),
          r.policy_loss,
          r.value_loss,
          r.entropy,
          r.approx_kl,
          r.clip_fraction};
}

namespace {

bool params_finite(Policy& policy) {
  for (const auto& view : policy.parameter_views()) {
    if (!view.allFinite()) return false;
  }
  return true;
}

}  // namespace

TrainResult train_loop(
    const TrainerConfig& config, VectorEnv& envs,
    const curriculum::CurriculumState& initial_curriculum,
    const std::optional<std::string>& run_dir, const std::string& config_json,
    const std::function<void(const IterationRow&)>& on_iteration) {
  config.validate();
  curriculum::validate(initial_curriculum);

  Rng rng(config.seed);
  PolicyConfig pcfg;
  pcfg.obs_dim = envs.obs_dim();
  pcfg.priv_dim = envs.priv_dim();
  pcfg.action_dim = envs.action_dim();
  pcfg.actor_hidden = config.actor_hidden;
  pcfg.critic_hidden = config.critic_hidden;
  pcfg.init_log_std = config.init_log_std;
  pcfg.min_log_std = config.min_log_std;

  TrainResult result;
  Checkpoint& ckpt = result.final_checkpoint;
  ckpt.policy = Policy(pcfg, rng);
  ckpt.obs_normalizer =
      RunningNormalizer(pcfg.obs_dim, config.normalize_observations);
  ckpt.priv_normalizer =
      RunningNormalizer(pcfg.priv_dim, config.normalize_observations);
  ckpt.curriculum = initial_curriculum;
  ckpt.config_json = config_json;

  Adam adam;
  envs.set_curriculum(ckpt.curriculum);
  envs.reset_all();

  std::unique_ptr<CsvWriter> metrics;
  std::string ckpt_dir;
  if (run_dir) {
    std::filesystem::create_directories(*run_dir);
    metrics = std::make_unique<CsvWriter>(*run_dir + "/metrics.csv",
                                          metrics_columns());
    ckpt_dir = *run_dir + "/checkpoints";
    std::filesystem::create_directories(ckpt_dir);
  }

  auto save = [&](const std::string& name) {
    if (!run_dir) return;
    const std::string path = ckpt_dir + "/" + name;
    save_checkpoint(ckpt, path);
    result.last_checkpoint_path = path;
  };
  save("initial.ckpt");

  RolloutBatch batch;
  const PpoConfig ppo_cfg = config.ppo();

  for (long iter = 0; iter < config.max_iterations; ++iter) {
    collect_rollouts(envs, ckpt.policy, ckpt.obs_normalizer,
                     ckpt.priv_normalizer, config.horizon, rng, batch);
    ckpt.total_steps += static_cast<long long>(batch.size());

    auto [advantages, returns] =
        compute_gae(batch, config.discount, config.gae_lambda);
    if (config.normalize_advantages) {
      normalize_advantages(advantages, batch.valid);
    }

    const UpdateStats stats =
        ppo_update(ckpt.policy, adam, batch, advantages, returns, ppo_cfg, rng);

    // Reward-gated curricula: one gate evaluation per iteration on the
    // rollout-mean tracking reward, both rules applied on the same event.
    const double r_trk_max = rewards::tracking_reward_max();
    const bool fired = curriculum::threshold_met(
        batch.mean_tracking, r_trk_max, ckpt.curriculum.lambda_threshold);
    if (fired) {
      if (config.velocity_curriculum) {
        ckpt.curriculum = curriculum::update_velocity_range(
            ckpt.curriculum, batch.mean_tracking, r_trk_max);
      }
      if (config.cycle_time_curriculum) {
        ckpt.curriculum = curriculum::update_cycle_time(
            ckpt.curriculum, batch.mean_tracking, r_trk_max);
      }
      envs.set_curriculum(ckpt.curriculum);
    }

    IterationRow row;
    row.iteration = iter;
    row.total_steps = ckpt.total_steps;
    row.mean_tracking = batch.mean_tracking;
    row.gate_fired = fired;
    row.v_max = ckpt.curriculum.v_max;
    row.cycle_time = ckpt.curriculum.cycle_time;
    row.mean_episode_return = batch.mean_episode_return;
    row.mean_episode_length = batch.mean_episode_length;
    row.episodes = batch.episodes_finished;
    row.falls = batch.falls;
    row.faults = batch.faults;
    row.policy_loss = stats.policy_loss;
    row.value_loss = stats.value_loss;
    row.entropy = stats.entropy;
    row.approx_kl = stats.approx_kl;
    row.clip_fraction = stats.clip_fraction;
    result.history.push_back(row);
    if (metrics) metrics->row(metrics_values(row));
    if (on_iteration) on_iteration(row);

    ckpt.iteration = iter + 1;

    if (stats.aborted || !params_finite(ckpt.policy)) {
      // Keep the last good checkpoint on disk and stop.
      result.halted_non_finite = true;
      break;
    }
    if (config.checkpoint_interval > 0 &&
        (iter + 1) % config.checkpoint_interval == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "iter_%06ld.ckpt", iter + 1);
      save(name);
    }
  }

  if (!result.halted_non_finite && config.max_iterations > 0) {
    save("final.ckpt");
  }
  return result;
}

}  // namespace kinolab::trainer
