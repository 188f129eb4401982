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

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "curriculum.hpp"
#include "metrics.hpp"
#include "ppo.hpp"

namespace kinolab::trainer {

struct TrainerConfig {
  int num_envs = 64;        // paper scale: 4096
  int horizon = 60;
  int minibatch_size = 960;  // paper scale: 61440
  int epochs = 5;
  int max_iterations = 1000;
  double discount = 0.994;
  double gae_lambda = 0.9;
  double entropy_coeff = 0.001;
  double learning_rate = 1e-5;
  double clip_ratio = 0.2;
  double value_coeff = 1.0;
  double max_grad_norm = 1.0;
  std::uint64_t seed = 1;
  bool normalize_advantages = true;
  bool normalize_observations = true;
  int checkpoint_interval = 200;

  std::vector<int> actor_hidden{512, 256, 128};
  std::vector<int> critic_hidden{512, 256, 128};
  double init_log_std = 0.0;
  double min_log_std = -2.9957322735539909;  // ln(0.05)

  bool velocity_curriculum = true;
  bool cycle_time_curriculum = true;

  // Throws ConfigError on invariant violations (0 < discount < 1, lambda in
  // [0, 1], minibatch divides num_envs * horizon).
  void validate() const;

  PpoConfig ppo() const;
};

struct IterationRow {
  long iteration = 0;
  long long total_steps = 0;
  double mean_tracking = 0.0;
  bool gate_fired = false;
  double v_max = 0.0;
  double cycle_time = 0.0;
  double mean_episode_return = 0.0;
  double mean_episode_length = 0.0;
  int episodes = 0;
  int falls = 0;
  int faults = 0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

struct TrainResult {
  Checkpoint final_checkpoint;
  std::vector<IterationRow> history;
  bool halted_non_finite = false;
  std::string last_checkpoint_path;
};

// Metric column names, in row order.
std::vector<std::string> metrics_columns();
std::vector<double> metrics_values(const IterationRow& row);

// Iterates collect -> GAE -> PPO update -> curriculum gate. When `run_dir`
// is set, writes metrics.csv and periodic checkpoints under it. Training
// halts (keeping the last good checkpoint) if parameters go non-finite.
TrainResult train_loop(
    const TrainerConfig& config, VectorEnv& envs,
    const curriculum::CurriculumState& initial_curriculum,
    const std::optional<std::string>& run_dir,
    const std::string& config_json = "{}",
    const std::function<void(const IterationRow&)>& on_iteration = nullptr);

}  // namespace kinolab::trainer
