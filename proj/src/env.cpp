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

#include "env.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "errors.hpp"

namespace kinolab::env {

namespace {

Eigen::Vector3d euler_zyx(const Eigen::Quaterniond& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  const double roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
  const double pitch = std::asin(std::clamp(2.0 * (w * y - z * x), -1.0, 1.0));
  const double yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  return {roll, pitch, yaw};
}

}  // namespace

void DomainRandomizationConfig::validate() const {
  auto range_ok = [](const std::array<double, 2>& r) { return r[0] <= r[1]; };
  if (!range_ok(friction_range) || !range_ok(mass_scale_range) ||
      !range_ok(gain_scale_range) || !range_ok(push_interval_range)) {
    throw ConfigError("domain randomization: inverted range");
  }
  if (friction_range[0] < 0.0 || mass_scale_range[0] <= 0.0 ||
      gain_scale_range[0] <= 0.0) {
    throw ConfigError("domain randomization: non-positive lower bound");
  }
  if (push_interval_range[0] <= 0.0) {
    throw ConfigError("domain randomization: push interval must be positive");
  }
}

Environment::Environment(const RobotSpec& spec,
                         const DomainRandomizationConfig& dr,
                         const rewards::RewardParams& reward_params,
                         const EnvOptions& options, std::uint64_t seed)
    : spec_(spec),
      dr_(dr),
      reward_params_(reward_params),
      options_(options),
      rng_(seed) {
  dr_.validate();
  spec_.validate();
  last_action_ = Eigen::VectorXd::Zero(kNumJoints);
  prev_action_ = Eigen::VectorXd::Zero(kNumJoints);
  reference_targets_ = spec_.default_angles();
  applied_torques_ = Eigen::VectorXd::Zero(kNumJoints);
  reset();
}

void Environment::set_curriculum(const curriculum::CurriculumState& state) {
  curriculum::validate(state);
  curriculum_ = state;
}

double Environment::noise(double scale) {
  return dr_.noise_enabled && dr_.enabled ? rng_.uniform(-scale, scale) : 0.0;
}

void Environment::reset() {
  cycle_time_ = curriculum_.cycle_time;
  command_ = curriculum::sample_command(curriculum_, rng_);

  friction_ = options_.nominal_friction;
  mass_scale_ = options_.nominal_mass_scale;
  gain_scale_ = options_.nominal_gain_scale;
  if (dr_.enabled) {
    friction_ = rng_.uniform(dr_.friction_range[0], dr_.friction_range[1]);
    mass_scale_ = rng_.uniform(dr_.mass_scale_range[0], dr_.mass_scale_range[1]);
    gain_scale_ = rng_.uniform(dr_.gain_scale_range[0], dr_.gain_scale_range[1]);
  }
  ContactParams contact = options_.contact;
  contact.friction = friction_;
  sim_ = std::make_unique<Sim>(spec_, mass_scale_, gain_scale_, contact,
                               options_.control_dt / options_.substeps,
                               options_.substeps, options_.gravity);

  Eigen::VectorXd q = spec_.default_angles();
  if (dr_.enabled && dr_.reset_joint_noise > 0.0) {
    for (int j = 0; j < kNumJoints; ++j) q[j] += noise(dr_.reset_joint_noise);
  }
  const double height_offset =
      dr_.enabled ? noise(dr_.reset_height_noise) : 0.0;
  state_ = sim_->make_state(q, height_offset);
  // Nominal standing height regardless of joint noise; contact settles it.
  state_.base_position.z() = spec_.nominal_base_height + height_offset;
  state_.phase = 0.0;

  next_push_time_ = dr_.enabled && dr_.push_enabled
                        ? rng_.uniform(dr_.push_interval_range[0],
                                       dr_.push_interval_range[1])
                        : std::numeric_limits<double>::infinity();
  push_velocity_.setZero();
  push_angular_.setZero();

  last_action_.setZero();
  prev_action_.setZero();
  reference_targets_ = spec_.default_angles();
  foot_heights_ = {0.0, 0.0};
  foot_contact_ = {true, true};
  applied_torques_.setZero();
  momentum_ = kinodyn::total_angular_momentum(sim_->snapshot(state_));

  obs_history_.clear();
  priv_history_.clear();
  push_frames();
}

void Environment::set_command(const curriculum::Command& command) {
  command_ = command;
}

EnvStepResult Environment::step(const Eigen::VectorXd& action) {
  EnvStepResult result;
  if (action.size() != kNumJoints || !action.allFinite()) {
    result.termination = Termination::kFault;
    result.done = true;
    record_.termination = result.termination;
    return result;
  }

  prev_action_ = last_action_;
  last_action_ =
      action.cwiseMax(-spec_.action_clip).cwiseMin(spec_.action_clip);

  Eigen::VectorXd targets =
      spec_.default_angles() + spec_.action_scale * last_action_;
  if (options_.lock_arms) {
    for (int j : {kLeftShoulderPitch, kLeftElbowPitch, kRightShoulderPitch,
                  kRightElbowPitch}) {
      targets[j] = spec_.joints[j].default_angle;
    }
  }
  for (int j = 0; j < kNumJoints; ++j) {
    targets[j] = std::clamp(targets[j], spec_.joints[j].lower_limit,
                            spec_.joints[j].upper_limit);
  }

  if (state_.time >= next_push_time_) {
    const double angle = rng_.uniform(0.0, 2.0 * M_PI);
    const double mag = rng_.uniform(0.0, dr_.push_velocity_max);
    push_velocity_ = Eigen::Vector2d(mag * std::cos(angle), mag * std::sin(angle));
    for (int i = 0; i < 3; ++i) {
      push_angular_[i] = rng_.uniform(-dr_.push_angular_max, dr_.push_angular_max);
    }
    sim_->apply_velocity_impulse(
        state_, {push_velocity_.x(), push_velocity_.y(), 0.0}, push_angular_);
    next_push_time_ = state_.time + rng_.uniform(dr_.push_interval_range[0],
                                                 dr_.push_interval_range[1]);
  }

  const StepInfo info = sim_->step(state_, targets, cycle_time_);
  foot_heights_ = info.foot_heights;
  foot_contact_ = info.foot_contact;
  applied_torques_ = info.applied_torques;
  momentum_ = kinodyn::total_angular_momentum(info.snapshot);

  reference_targets_ =
      reference_joint_targets(state_.phase, command_, cycle_time_, spec_,
                              curriculum_.v_max, options_.gait);

  const Eigen::Vector3d euler = euler_zyx(state_.base_orientation);
  const double yaw = euler.z();
  const Eigen::Vector3d v = state_.base_lin_velocity;
  const double heading_vx = std::cos(yaw) * v.x() + std::sin(yaw) * v.y();
  const double heading_vy = -std::sin(yaw) * v.x() + std::cos(yaw) * v.y();

  rewards::RewardContext ctx;
  ctx.momentum = momentum_;
  ctx.base_height = state_.base_position.z();
  ctx.nominal_base_height = spec_.nominal_base_height;
  ctx.target_height_offset = options_.target_height_offset;
  ctx.foot_heights = foot_heights_;
  ctx.target_foot_height = options_.target_foot_height;
  ctx.swing_mask = swing_mask(state_.phase, options_.gait.swing_ramp);
  ctx.joint_positions = state_.joint_positions;
  ctx.joint_targets = reference_targets_;
  ctx.joint_velocities = state_.joint_velocities;
  ctx.commanded_velocity =
      Eigen::Vector3d(command_.vx, command_.vy, command_.yaw_rate);
  ctx.actual_base_velocity =
      Eigen::Vector3d(heading_vx, heading_vy, state_.base_ang_velocity.z());
  ctx.curriculum_v_max = curriculum_.v_max;
  ctx.phase = state_.phase;
  ctx.base_roll = euler.x();
  ctx.base_pitch = euler.y();
  ctx.applied_torques = applied_torques_;
  ctx.action = last_action_;
  ctx.prev_action = prev_action_;

  result.breakdown = rewards::compose_total(ctx, reward_params_);
  result.tracking_raw = result.breakdown.velocity_tracking_raw;
  result.rl_reward = result.breakdown.total *
                     (options_.scale_rewards_by_dt ? options_.control_dt : 1.0);

  if (info.fault) {
    result.termination = Termination::kFault;
  } else if (state_.base_position.z() <
                 options_.fall_height_ratio * spec_.nominal_base_height ||
             std::abs(euler.x()) > options_.fall_tilt ||
             std::abs(euler.y()) > options_.fall_tilt) {
    result.termination = Termination::kFell;
  } else if (state_.time >= options_.episode_length_s) {
    result.termination = Termination::kTimeout;
  }
  result.done = result.termination != Termination::kRunning;

  push_frames();

  record_.time = state_.time;
  record_.phase = state_.phase;
  record_.command = command_;
  record_.base_position = state_.base_position;
  record_.base_orientation = state_.base_orientation;
  record_.base_lin_velocity = state_.base_lin_velocity;
  record_.base_ang_velocity = state_.base_ang_velocity;
  record_.joint_positions = state_.joint_positions;
  record_.joint_velocities = state_.joint_velocities;
  record_.action = last_action_;
  record_.momentum = momentum_;
  record_.breakdown = result.breakdown;
  record_.foot_contact = foot_contact_;
  record_.heading_velocity = heading_vx;
  record_.termination = result.termination;
  return result;
}

std::array<double, kSingleObsDim> Environment::build_single_obs(
    bool with_noise) {
  std::array<double, kSingleObsDim> frame{};

  const auto [clock_sin, clock_cos] = gait_clock(state_.time, cycle_time_);
  frame[0] = clock_sin;
  frame[1] = clock_cos;
  frame[2] = command_.vx;
  frame[3] = command_.vy;
  frame[4] = command_.yaw_rate;

  const Eigen::VectorXd defaults = spec_.default_angles();
  for (int j = 0; j < kNumJoints; ++j) {
    frame[5 + j] = state_.joint_positions[j] - defaults[j] +
                   (with_noise ? noise(dr_.noise_joint_pos) : 0.0);
  }
  for (int j = 0; j < kNumJoints; ++j) {
    frame[21 + j] = state_.joint_velocities[j] +
                    (with_noise ? noise(dr_.noise_joint_vel) : 0.0);
  }

  const Eigen::Matrix3d rot = state_.base_orientation.toRotationMatrix();
  const Eigen::Vector3d body_omega = rot.transpose() * state_.base_ang_velocity;
  for (int i = 0; i < 3; ++i) {
    frame[37 + i] =
        body_omega[i] + (with_noise ? noise(dr_.noise_ang_vel) : 0.0);
  }
  const Eigen::Vector3d euler = euler_zyx(state_.base_orientation);
  for (int i = 0; i < 3; ++i) {
    frame[40 + i] = euler[i] + (with_noise ? noise(dr_.noise_euler) : 0.0);
  }
  for (int j = 0; j < kNumJoints; ++j) frame[43 + j] = last_action_[j];
  return frame;
}

void Environment::push_frames() {
  obs_history_.push_front(build_single_obs(true));
  if (obs_history_.size() > kObsStack) obs_history_.pop_back();

  std::array<double, kSinglePrivDim> priv{};
  const auto clean = build_single_obs(false);
  std::memcpy(priv.data(), clean.data(), sizeof(clean));

  priv[59] = friction_;
  priv[60] = mass_scale_;
  priv[61] = state_.base_lin_velocity.x();
  priv[62] = state_.base_lin_velocity.y();
  priv[63] = state_.base_lin_velocity.z();
  priv[64] = push_velocity_.x();
  priv[65] = push_velocity_.y();
  priv[66] = push_angular_.x();
  priv[67] = push_angular_.y();
  priv[68] = push_angular_.z();
  for (int j = 0; j < kNumJoints; ++j) {
    priv[69 + j] = reference_targets_[j] - state_.joint_positions[j];
  }
  const auto mask = swing_mask(state_.phase, options_.gait.swing_ramp);
  priv[85] = 1.0 - mask[0];  // periodic stance mask
  priv[86] = 1.0 - mask[1];
  priv[87] = foot_contact_[0] ? 1.0 : 0.0;
  priv[88] = foot_contact_[1] ? 1.0 : 0.0;

  priv_history_.push_front(priv);
  if (priv_history_.size() > kPrivStack) priv_history_.pop_back();
}

void Environment::write_observation(double* out) const {
  std::memset(out, 0, sizeof(double) * kStackedObsDim);
  int slot = 0;
  for (const auto& frame : obs_history_) {
    std::memcpy(out + slot * kSingleObsDim, frame.data(), sizeof(frame));
    ++slot;
  }
}

void Environment::write_privileged(double* out) const {
  std::memset(out, 0, sizeof(double) * kStackedPrivDim);
  int slot = 0;
  for (const auto& frame : priv_history_) {
    std::memcpy(out + slot * kSinglePrivDim, frame.data(), sizeof(frame));
    ++slot;
  }
}

}  // namespace kinolab::env
