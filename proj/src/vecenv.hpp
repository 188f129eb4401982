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

#include <memory>
#include <vector>

#include "env.hpp"
#include "ppo.hpp"

namespace kinolab::trainer {

// Batch facade over independent biped environments, stepped sequentially.
class BipedVectorEnv : public VectorEnv {
 public:
  BipedVectorEnv(const env::RobotSpec& spec,
                 const env::DomainRandomizationConfig& dr,
                 const rewards::RewardParams& reward_params,
                 const env::EnvOptions& options, int num_envs,
                 std::uint64_t seed);

  int num_envs() const override { return static_cast<int>(envs_.size()); }
  int obs_dim() const override { return env::kStackedObsDim; }
  int priv_dim() const override { return env::kStackedPrivDim; }
  int action_dim() const override { return env::kNumJoints; }
  double control_dt() const override;

  void reset_all() override;
  void set_curriculum(const curriculum::CurriculumState& state) override;
  void observe(RowMatrix& obs, RowMatrix& priv) override;
  void step(const RowMatrix& actions, StepOut& out) override;

  env::Environment& env(int i) { return *envs_[i]; }

 private:
  std::vector<std::unique_ptr<env::Environment>> envs_;
};

// 1-D velocity-tracking point mass wired through the same reward and
// curriculum plumbing; the trainer smoke tests run on this.
class PointMassVectorEnv : public VectorEnv {
 public:
  static constexpr int kFrameDim = 3;   // command, velocity, last action
  static constexpr int kFrameStack = 3;
  static constexpr int kPrivFrameDim = 4;  // + tracking error
  static constexpr int kPrivStack = 2;

  PointMassVectorEnv(int num_envs, std::uint64_t seed, int episode_steps = 256,
                     double dt = 0.02);

  int num_envs() const override { return static_cast<int>(state_.size()); }
  int obs_dim() const override { return kFrameDim * kFrameStack; }
  int priv_dim() const override { return kPrivFrameDim * kPrivStack; }
  int action_dim() const override { return 1; }
  double control_dt() const override { return dt_; }

  void reset_all() override;
  void set_curriculum(const curriculum::CurriculumState& state) override;
  void observe(RowMatrix& obs, RowMatrix& priv) override;
  void step(const RowMatrix& actions, StepOut& out) override;

  const rewards::RewardParams& reward_params() const { return reward_params_; }

 private:
  struct State {
    double velocity = 0.0;
    double command = 0.0;
    double last_action = 0.0;
    int steps = 0;
    std::vector<double> obs_frames;   // ring of kFrameStack frames
    std::vector<double> priv_frames;
  };
  void reset_one(int i);
  void write_frames(int i);

  std::vector<State> state_;
  std::vector<Rng> rngs_;
  curriculum::CurriculumState curriculum_;
  rewards::RewardParams reward_params_;
  int episode_steps_;
  double dt_;
};

}  // namespace kinolab::trainer
