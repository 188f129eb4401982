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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kinodyn.hpp"

namespace kinolab::rewards {

// Reward terms for velocity-tracking locomotion: an angular-momentum penalty,
// a velocity-scaled bundle (base height, feet clearance, joint position), a
// linear-velocity tracking reward that also gates the curricula, and the
// usual regularizers. Everything is a pure function of a RewardContext.

struct RewardWeights {
  double alpha_a = 0.05;  // angular-momentum category
  double alpha_v = 0.1;   // velocity-related category
  double alpha_c = 1.0;   // general category
  double alpha_b = 0.2;   // base height, inside the velocity bundle
  double alpha_f = 1.0;   // feet clearance
  double alpha_p = 1.6;   // joint position
  std::map<std::string, double> general_term_weights = {
      {"action_rate", 0.05}, {"alive", 0.25},         {"orientation", 2.0},
      {"torque", 2e-6},      {"velocity_tracking", 1.2}, {"yaw_tracking", 0.6},
  };
};

struct RewardConstants {
  // Angular momentum (exp-norm penalty, clipped).
  double momentum_clip_lo = -5.0;
  double momentum_clip_hi = 0.0;
  bool momentum_yaw_only = false;  // penalize only the z component when true

  // Base height.
  double base_height_beta = 100.0;
  double base_height_gamma = 0.05;

  // Joint position.
  double joint_pos_beta = -2.0;
  double joint_pos_gamma = 0.2;
  double joint_pos_clip_lo = 0.0;
  double joint_pos_clip_hi = 0.5;
  // Elementwise clamp on -theta_dot before exponentiation; numerical guard.
  double joint_vel_exponent_clamp = 5.0;

  // Feet clearance: the literal signed form by default; the bounded variant
  // replaces each contribution with -|h - target*ratio|.
  bool feet_clearance_bounded = false;

  // Velocity tracking.
  double tracking_sigma = 4.0;
  double yaw_tracking_sigma = 4.0;

  // Ablation: pin the velocity ratio g(v_cmd, v_max) at 1, turning the
  // velocity-scaled terms into fixed-target rewards.
  bool fixed_velocity_ratio = false;

  // Floor applied to each quadratic penalty term so every general term stays
  // bounded.
  double penalty_floor = -10.0;
};

struct RewardParams {
  RewardWeights weights;
  RewardConstants constants;
};

struct RewardContext {
  kinodyn::MomentumReport momentum;

  double base_height = 0.0;          // current base height, m
  double nominal_base_height = 0.0;  // standing height, m
  double target_height_offset = 0.0; // \hat h^b, m (scales the crouch target)

  std::array<double, 2> foot_heights{};  // sole height above ground, m
  double target_foot_height = 0.0;       // \hat h^f, m
  std::array<double, 2> swing_mask{};    // xi(t) per foot, in [0, 1]

  Eigen::VectorXd joint_positions;   // 16, rad
  Eigen::VectorXd joint_targets;     // 16, rad (reference, not PD target)
  Eigen::VectorXd joint_velocities;  // 16, rad/s

  Eigen::Vector3d commanded_velocity = Eigen::Vector3d::Zero();  // vx, vy, yaw rate
  Eigen::Vector3d actual_base_velocity = Eigen::Vector3d::Zero();
  double curriculum_v_max = 1.0;
  double phase = 0.0;

  // Inputs for the general bundle.
  double base_roll = 0.0;
  double base_pitch = 0.0;
  Eigen::VectorXd applied_torques;  // 16, N m
  Eigen::VectorXd action;           // 16
  Eigen::VectorXd prev_action;      // 16
};

struct TermValue {
  double raw = 0.0;
  double weighted = 0.0;
};

struct RewardBreakdown {
  double total = 0.0;
  TermValue angular_momentum;  // r^a
  TermValue base_height;       // r^b, weighted by alpha_v * alpha_b
  TermValue feet_clearance;    // r^f, weighted by alpha_v * alpha_f
  TermValue joint_position;    // r^p, weighted by alpha_v * alpha_p
  double velocity_tracking_raw = 0.0;  // r^trk, also appears in `general`
  // Name -> value, iterated in name order when composing the total.
  std::vector<std::pair<std::string, TermValue>> general;
};

// The supremum of the tracking reward; the curriculum threshold is
// lambda * tracking_reward_max().
constexpr double tracking_reward_max() { return 1.0; }

// v_cmd / v_max clamped to [0, 1]. Throws InvalidInput when v_max <= 0.
double velocity_ratio(double v_cmd, double v_max);

// clip(-exp(|L|), c1, c2); |L| is the norm of the full momentum vector, or of
// its z component alone when yaw_only is set. Throws ConfigError if c1 > c2.
double reward_angular_momentum(const kinodyn::MomentumReport& momentum,
                               double c1, double c2, bool yaw_only = false);

// exp(-beta * |h_dev - gamma * h_hat * ratio|); h_dev is the base-height
// deviation from the nominal standing height.
double reward_base_height(double h_dev, double h_hat, double beta, double gamma,
                          double ratio);

// sum over feet of mask * (h - target * ratio); literal signed form, or the
// bounded -|.| variant.
double reward_feet_clearance(std::span<const double> foot_heights,
                             double target, double ratio,
                             std::span<const double> swing_mask,
                             bool bounded = false);

// exp(beta * |e|) - gamma * clip(|e|, c1, c2) with
// e = (theta_hat - theta) .* exp(-clamp(theta_dot)).
double reward_joint_position(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& theta_hat,
                             const Eigen::VectorXd& theta_dot,
                             double beta = -2.0, double gamma = 0.2,
                             double c1 = 0.0, double c2 = 0.5,
                             double vel_exponent_clamp = 5.0);

// exp(-sigma * |v_xy - v_xy_cmd|^2) on the planar components.
double reward_velocity_tracking(const Eigen::Vector3d& actual,
                                const Eigen::Vector3d& commanded,
                                double sigma = 4.0);

// The baseline-convention regularizers; see README for names and defaults.
std::map<std::string, double> general_reward_bundle(const RewardContext& context,
                                                    const RewardParams& params);

// total = alpha_a r^a + alpha_v (alpha_b r^b + alpha_f r^f + alpha_p r^p)
//       + alpha_c * sum of weighted general terms.
RewardBreakdown compose_total(const RewardContext& context,
                              const RewardParams& params);

}  // namespace kinolab::rewards
