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
#include <array>
#include <deque>
#include <memory>
#include <optional>

#include "curriculum.hpp"
#include "gait.hpp"
#include "rewards.hpp"
#include "rng.hpp"
#include "robot_spec.hpp"
#include "sim.hpp"

namespace kinolab::env {

inline constexpr int kSingleObsDim = 59;
inline constexpr int kSinglePrivDim = 89;
inline constexpr int kObsStack = 15;
inline constexpr int kPrivStack = 3;
inline constexpr int kStackedObsDim = kSingleObsDim * kObsStack;    // 885
inline constexpr int kStackedPrivDim = kSinglePrivDim * kPrivStack; // 267

struct DomainRandomizationConfig {
  bool enabled = true;
  std::array<double, 2> friction_range{0.2, 1.3};
  std::array<double, 2> mass_scale_range{0.8, 1.2};
  std::array<double, 2> gain_scale_range{0.9, 1.1};

  bool push_enabled = true;
  std::array<double, 2> push_interval_range{4.0, 8.0};  // s
  double push_velocity_max = 0.5;                       // m/s, planar impulse
  double push_angular_max = 0.3;                        // rad/s

  bool noise_enabled = true;
  double noise_joint_pos = 0.01;   // rad
  double noise_joint_vel = 0.15;   // rad/s
  double noise_ang_vel = 0.05;     // rad/s
  double noise_euler = 0.01;       // rad

  double reset_joint_noise = 0.03;   // rad
  double reset_height_noise = 0.01;  // m

  // Throws ConfigError when a range is inverted.
  void validate() const;
};

struct EnvOptions {
  double control_dt = 0.01;
  int substeps = 10;  // 1 ms physics
  double episode_length_s = 24.0;
  double gravity = 9.81;
  ContactParams contact;

  double fall_height_ratio = 0.4;  // fell if height < ratio * nominal
  double fall_tilt = 1.0;          // rad, roll or pitch

  bool scale_rewards_by_dt = true;

  GaitParams gait;
  double target_foot_height = 0.08;    // \hat h^f
  double target_height_offset = -0.6;  // \hat h^b; crouch at speed

  bool lock_arms = false;  // ablation: hold the 4 arm joints at defaults

  // Fixed physical parameters used when domain randomization is disabled
  // (evaluation, perturbed-physics profiles).
  double nominal_friction = 0.9;
  double nominal_mass_scale = 1.0;
  double nominal_gain_scale = 1.0;
};

enum class Termination { kRunning, kFell, kTimeout, kFault };

struct EnvStepResult {
  rewards::RewardBreakdown breakdown;
  double rl_reward = 0.0;      // breakdown.total, dt-scaled when configured
  double tracking_raw = 0.0;   // r^trk of this step
  Termination termination = Termination::kRunning;
  bool done = false;
};

// Everything a trajectory log line needs for one control step.
struct TrajectoryRecord {
  double time = 0.0;
  double phase = 0.0;
  curriculum::Command command;
  Eigen::Vector3d base_position;
  Eigen::Quaterniond base_orientation;
  Eigen::Vector3d base_lin_velocity;
  Eigen::Vector3d base_ang_velocity;
  Eigen::VectorXd joint_positions;
  Eigen::VectorXd joint_velocities;
  Eigen::VectorXd action;
  kinodyn::MomentumReport momentum;
  rewards::RewardBreakdown breakdown;
  std::array<bool, 2> foot_contact{};
  double heading_velocity = 0.0;  // forward speed in the heading frame
  Termination termination = Termination::kRunning;
};

// One simulated robot. Owns its RNG stream; everything it draws is a
// deterministic function of the seed and the call sequence.
class Environment {
 public:
  Environment(const RobotSpec& spec, const DomainRandomizationConfig& dr,
              const rewards::RewardParams& reward_params,
              const EnvOptions& options, std::uint64_t seed);

  // Curriculum values are picked up at the next reset.
  void set_curriculum(const curriculum::CurriculumState& state);

  // Starts a new episode; draws randomized parameters and the command.
  void reset();
  // Overrides the sampled command (evaluation drives fixed commands).
  void set_command(const curriculum::Command& command);

  EnvStepResult step(const Eigen::VectorXd& action);

  int obs_dim() const { return kStackedObsDim; }
  int priv_dim() const { return kStackedPrivDim; }
  void write_observation(double* out) const;  // newest frame first
  void write_privileged(double* out) const;

  const SimState& sim_state() const { return state_; }
  const curriculum::Command& command() const { return command_; }
  const kinodyn::MomentumReport& momentum() const { return momentum_; }
  const TrajectoryRecord& last_record() const { return record_; }
  double episode_friction() const { return friction_; }
  double episode_mass_scale() const { return mass_scale_; }
  double cycle_time() const { return cycle_time_; }
  const RobotSpec& spec() const { return spec_; }
  const EnvOptions& options() const { return options_; }

 private:
  void push_frames();
  std::array<double, kSingleObsDim> build_single_obs(bool with_noise);
  double noise(double scale);

  RobotSpec spec_;
  DomainRandomizationConfig dr_;
  rewards::RewardParams reward_params_;
  EnvOptions options_;
  Rng rng_;

  curriculum::CurriculumState curriculum_;
  curriculum::Command command_;
  double cycle_time_ = 0.64;

  std::unique_ptr<Sim> sim_;
  SimState state_;
  double friction_ = 0.9;
  double mass_scale_ = 1.0;
  double gain_scale_ = 1.0;
  double next_push_time_ = 0.0;
  Eigen::Vector2d push_velocity_ = Eigen::Vector2d::Zero();
  Eigen::Vector3d push_angular_ = Eigen::Vector3d::Zero();

  Eigen::VectorXd last_action_;
  Eigen::VectorXd prev_action_;
  Eigen::VectorXd reference_targets_;
  std::array<double, 2> foot_heights_{};
  std::array<bool, 2> foot_contact_{};
  Eigen::VectorXd applied_torques_;
  kinodyn::MomentumReport momentum_;
  TrajectoryRecord record_;

  std::deque<std::array<double, kSingleObsDim>> obs_history_;
  std::deque<std::array<double, kSinglePrivDim>> priv_history_;
};

}  // namespace kinolab::env
