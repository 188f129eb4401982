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

#include "vecenv.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace kinolab::trainer {

namespace {

StepKind to_kind(env::Termination t) {
  switch (t) {
    case env::Termination::kRunning: return StepKind::kRunning;
    case env::Termination::kFell: return StepKind::kFell;
    case env::Termination::kTimeout: return StepKind::kTimeout;
    case env::Termination::kFault: return StepKind::kFault;
  }
  return StepKind::kRunning;
}

}  // namespace

BipedVectorEnv::BipedVectorEnv(const env::RobotSpec& spec,
                               const env::DomainRandomizationConfig& dr,
                               const rewards::RewardParams& reward_params,
                               const env::EnvOptions& options, int num_envs,
                               std::uint64_t seed) {
  Rng seeder(seed);
  for (int i = 0; i < num_envs; ++i) {
    Rng stream = seeder.spawn(i);
    envs_.push_back(std::make_unique<env::Environment>(
        spec, dr, reward_params, options, stream.integer(UINT64_MAX)));
  }
}

double BipedVectorEnv::control_dt() const {
  return envs_.empty() ? 0.01 : envs_[0]->options().control_dt;
}

void BipedVectorEnv::reset_all() {
  for (auto& e : envs_) e->reset();
}

void BipedVectorEnv::set_curriculum(const curriculum::CurriculumState& state) {
  for (auto& e : envs_) e->set_curriculum(state);
}

void BipedVectorEnv::observe(RowMatrix& obs, RowMatrix& priv) {
  obs.resize(num_envs(), obs_dim());
  priv.resize(num_envs(), priv_dim());
  for (int i = 0; i < num_envs(); ++i) {
    envs_[i]->write_observation(obs.row(i).data());
    envs_[i]->write_privileged(priv.row(i).data());
  }
}

void BipedVectorEnv::step(const RowMatrix& actions, StepOut& out) {
  const int n = num_envs();
  out.reward.resize(n);
  out.tracking.resize(n);
  out.done.assign(n, 0);
  out.kind.assign(n, StepKind::kRunning);
  for (int i = 0; i < n; ++i) {
    const auto result = envs_[i]->step(actions.row(i).transpose());
    out.reward[i] = result.rl_reward;
    out.tracking[i] = result.tracking_raw;
    out.done[i] = result.done ? 1 : 0;
    out.kind[i] = to_kind(result.termination);
    if (result.done) envs_[i]->reset();
  }
}

PointMassVectorEnv::PointMassVectorEnv(int num_envs, std::uint64_t seed,
                                       int episode_steps, double dt)
    : episode_steps_(episode_steps), dt_(dt) {
  // Same composition machinery as the biped; only the tracking term carries
  // weight here.
  reward_params_.weights.alpha_a = 0.0;
  reward_params_.weights.alpha_v = 0.0;
  reward_params_.weights.alpha_c = 1.0;
  reward_params_.weights.general_term_weights = {
      {"action_rate", 0.005}, {"alive", 0.0},          {"orientation", 0.0},
      {"torque", 0.0},        {"velocity_tracking", 1.0}, {"yaw_tracking", 0.0},
  };

  Rng seeder(seed);
  for (int i = 0; i < num_envs; ++i) {
    rngs_.push_back(seeder.spawn(i));
    state_.emplace_back();
  }
  reset_all();
}

void PointMassVectorEnv::reset_one(int i) {
  State& s = state_[i];
  s.velocity = 0.0;
  s.command = curriculum::sample_command(curriculum_, rngs_[i]).vx;
  s.last_action = 0.0;
  s.steps = 0;
  s.obs_frames.assign(kFrameDim * kFrameStack, 0.0);
  s.priv_frames.assign(kPrivFrameDim * kPrivStack, 0.0);
  write_frames(i);
}

void PointMassVectorEnv::reset_all() {
  for (int i = 0; i < num_envs(); ++i) reset_one(i);
}

void PointMassVectorEnv::set_curriculum(const curriculum::CurriculumState& state) {
  curriculum_ = state;
}

void PointMassVectorEnv::write_frames(int i) {
  State& s = state_[i];
  // Shift one slot; newest first.
  for (int f = kFrameStack - 1; f > 0; --f) {
    for (int k = 0; k < kFrameDim; ++k) {
      s.obs_frames[f * kFrameDim + k] = s.obs_frames[(f - 1) * kFrameDim + k];
    }
  }
  s.obs_frames[0] = s.command;
  s.obs_frames[1] = s.velocity;
  s.obs_frames[2] = s.last_action;

  for (int f = kPrivStack - 1; f > 0; --f) {
    for (int k = 0; k < kPrivFrameDim; ++k) {
      s.priv_frames[f * kPrivFrameDim + k] =
          s.priv_frames[(f - 1) * kPrivFrameDim + k];
    }
  }
  s.priv_frames[0] = s.command;
  s.priv_frames[1] = s.velocity;
  s.priv_frames[2] = s.last_action;
  s.priv_frames[3] = s.command - s.velocity;
}

void PointMassVectorEnv::observe(RowMatrix& obs, RowMatrix& priv) {
  obs.resize(num_envs(), obs_dim());
  priv.resize(num_envs(), priv_dim());
  for (int i = 0; i < num_envs(); ++i) {
    for (int k = 0; k < obs_dim(); ++k) obs(i, k) = state_[i].obs_frames[k];
    for (int k = 0; k < priv_dim(); ++k) priv(i, k) = state_[i].priv_frames[k];
  }
}

void PointMassVectorEnv::step(const RowMatrix& actions, StepOut& out) {
  const int n = num_envs();
  out.reward.resize(n);
  out.tracking.resize(n);
  out.done.assign(n, 0);
  out.kind.assign(n, StepKind::kRunning);

  for (int i = 0; i < n; ++i) {
    State& s = state_[i];
    const double a = std::clamp(actions(i, 0), -3.0, 3.0);
    // Force-driven point mass with linear drag.
    s.velocity += dt_ * (2.0 * a - 0.8 * s.velocity);

    rewards::RewardContext ctx;
    ctx.joint_positions = Eigen::VectorXd::Zero(16);
    ctx.joint_targets = Eigen::VectorXd::Zero(16);
    ctx.joint_velocities = Eigen::VectorXd::Zero(16);
    ctx.applied_torques = Eigen::VectorXd::Zero(16);
    ctx.action = Eigen::VectorXd::Constant(16, a / 16.0);
    ctx.prev_action = Eigen::VectorXd::Constant(16, s.last_action / 16.0);
    ctx.commanded_velocity = Eigen::Vector3d(s.command, 0.0, 0.0);
    ctx.actual_base_velocity = Eigen::Vector3d(s.velocity, 0.0, 0.0);
    ctx.curriculum_v_max = curriculum_.v_max;
    const auto breakdown = rewards::compose_total(ctx, reward_params_);

    out.reward[i] = breakdown.total * dt_;
    out.tracking[i] = breakdown.velocity_tracking_raw;

    s.last_action = a;
    s.steps += 1;
    write_frames(i);

    if (s.steps >= episode_steps_) {
      out.done[i] = 1;
      out.kind[i] = StepKind::kTimeout;
      reset_one(i);
    }
  }
}

}  // namespace kinolab::trainer
