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

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "curriculum.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace kinolab::trainer {

// Batches of per-environment rows; row-major so row(i).data() is contiguous.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Termination kinds carried through rollout batches.
enum class StepKind : std::int8_t {
  kRunning = 0,
  kFell = 1,
  kTimeout = 2,
  kFault = 3,
};

// Abstract batch of environments the trainer collects from. Implementations
// auto-reset finished episodes inside step().
class VectorEnv {
 public:
  virtual ~VectorEnv() = default;
  virtual int num_envs() const = 0;
  virtual int obs_dim() const = 0;
  virtual int priv_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual double control_dt() const = 0;

  virtual void reset_all() = 0;
  virtual void set_curriculum(const curriculum::CurriculumState& state) = 0;

  // Current observations, one row per environment.
  virtual void observe(RowMatrix& obs, RowMatrix& priv) = 0;

  struct StepOut {
    Eigen::VectorXd reward;           // RL reward per env
    Eigen::VectorXd tracking;         // raw tracking reward per env
    std::vector<std::uint8_t> done;   // episode ended after this transition
    std::vector<StepKind> kind;
  };
  virtual void step(const RowMatrix& actions, StepOut& out) = 0;
};

struct RolloutBatch {
  int horizon = 0;
  int num_envs = 0;

  // Row index t * num_envs + e. Observations are stored as collected
  // (post-normalization), so recomputing log-probabilities reproduces the
  // collection-time values exactly.
  RowMatrix obs;
  RowMatrix priv;
  RowMatrix actions;
  Eigen::VectorXd log_probs;
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;
  Eigen::VectorXd dones;            // 0/1
  Eigen::VectorXd valid;            // 0 for transitions of faulted episodes
  std::vector<StepKind> kinds;
  Eigen::VectorXd bootstrap_values;  // per env, after the last transition

  double mean_tracking = 0.0;  // over valid transitions
  int episodes_finished = 0;
  int falls = 0;
  int faults = 0;
  double mean_episode_return = 0.0;
  double mean_episode_length = 0.0;

  int size() const { return horizon * num_envs; }
};

struct PpoConfig {
  double discount = 0.994;
  double gae_lambda = 0.9;
  double clip_ratio = 0.2;
  double entropy_coeff = 0.001;
  double value_coeff = 1.0;
  double learning_rate = 1e-5;
  double max_grad_norm = 1.0;  // 0 disables clipping
  int epochs = 5;
  int minibatch_size = 960;
  bool normalize_advantages = true;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  bool aborted = false;  // non-finite loss encountered
};

// delta_t = r_t + gamma V_{t+1} (1 - done) - V_t;
// A_t = delta_t + gamma lambda (1 - done) A_{t+1}. Returns raw
// (unnormalized) advantages and returns = A + V.
std::pair<Eigen::VectorXd, Eigen::VectorXd> compute_gae(
    const RolloutBatch& batch, double discount, double gae_lambda);

// In-place mean-zero unit-std over valid entries.
void normalize_advantages(Eigen::VectorXd& advantages,
                          const Eigen::VectorXd& valid);

// Loss and analytic gradients on a set of batch rows; the building block of
// ppo_update and of the finite-difference gradient checks.
struct MinibatchResult {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total_loss = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};
MinibatchResult ppo_minibatch(Policy& policy, const RolloutBatch& batch,
                              const Eigen::VectorXd& advantages,
                              const Eigen::VectorXd& returns,
                              const std::vector<int>& rows,
                              const PpoConfig& config,
                              Mlp::Grads* actor_grads, Mlp::Grads* critic_grads,
                              Eigen::RowVectorXd* log_std_grad);

// Clipped-surrogate PPO update over shuffled minibatches. Aborts (leaving
// parameters untouched for the offending minibatch) when a non-finite loss
// appears.
UpdateStats ppo_update(Policy& policy, Adam& adam, const RolloutBatch& batch,
                       const Eigen::VectorXd& advantages,
                       const Eigen::VectorXd& returns, const PpoConfig& config,
                       Rng& rng);

// Steps all environments `horizon` times, normalizing observations with the
// running normalizers (updated per frame as collected).
void collect_rollouts(VectorEnv& envs, const Policy& policy,
                      RunningNormalizer& obs_norm, RunningNormalizer& priv_norm,
                      int horizon, Rng& rng, RolloutBatch& batch);

}  // namespace kinolab::trainer
