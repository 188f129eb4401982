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

#include "rewards.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace kinolab::rewards {

namespace {

double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

}  // namespace

double velocity_ratio(double v_cmd, double v_max) {
  if (!(v_max > 0.0)) {
    throw InvalidInput("velocity_ratio: v_max must be positive");
  }
  return clip(v_cmd / v_max, 0.0, 1.0);
}

double reward_angular_momentum(const kinodyn::MomentumReport& momentum,
                               double c1, double c2, bool yaw_only) {
  if (c1 > c2) {
    throw ConfigError("reward_angular_momentum: clip bounds c1 > c2");
  }
  const double norm =
      yaw_only ? std::abs(momentum.total.z()) : momentum.total.norm();
  return clip(-std::exp(norm), c1, c2);
}

double reward_base_height(double h_dev, double h_hat, double beta, double gamma,
                          double ratio) {
  if (!(beta > 0.0)) {
    throw InvalidInput("reward_base_height: beta must be positive");
  }
  return std::exp(-beta * std::abs(h_dev - gamma * h_hat * ratio));
}

double reward_feet_clearance(std::span<const double> foot_heights,
                             double target, double ratio,
                             std::span<const double> swing_mask, bool bounded) {
  if (foot_heights.size() != swing_mask.size()) {
    throw InvalidInput("reward_feet_clearance: mismatched per-foot lengths");
  }
  double sum = 0.0;
  for (size_t i = 0; i < foot_heights.size(); ++i) {
    const double gap = foot_heights[i] - target * ratio;
    sum += swing_mask[i] * (bounded ? -std::abs(gap) : gap);
  }
  return sum;
}

double reward_joint_position(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& theta_hat,
                             const Eigen::VectorXd& theta_dot, double beta,
                             double gamma, double c1, double c2,
                             double vel_exponent_clamp) {
  if (theta.size() != theta_hat.size() || theta.size() != theta_dot.size()) {
    throw InvalidInput("reward_joint_position: mismatched vector lengths");
  }
  double sq = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double w = std::exp(
        clip(-theta_dot[i], -vel_exponent_clamp, vel_exponent_clamp));
    const double e = (theta_hat[i] - theta[i]) * w;
    sq += e * e;
  }
  const double norm = std::sqrt(sq);
  return std::exp(beta * norm) - gamma * clip(norm, c1, c2);
}

double reward_velocity_tracking(const Eigen::Vector3d& actual,
                                const Eigen::Vector3d& commanded,
                                double sigma) {
  const double ex = actual.x() - commanded.x();
  const double ey = actual.y() - commanded.y();
  return std::exp(-sigma * (ex * ex + ey * ey));
}

std::map<std::string, double> general_reward_bundle(const RewardContext& context,
                                                    const RewardParams& params) {
  const RewardConstants& k = params.constants;
  std::map<std::string, double> terms;

  terms["velocity_tracking"] = reward_velocity_tracking(
      context.actual_base_velocity, context.commanded_velocity,
      k.tracking_sigma);

  const double yaw_err =
      context.actual_base_velocity.z() - context.commanded_velocity.z();
  terms["yaw_tracking"] = std::exp(-k.yaw_tracking_sigma * yaw_err * yaw_err);

  const double tilt = context.base_roll * context.base_roll +
                      context.base_pitch * context.base_pitch;
  terms["orientation"] = std::max(-tilt, k.penalty_floor);

  double action_rate = 0.0;
  if (context.action.size() == context.prev_action.size()) {
    action_rate = (context.action - context.prev_action).squaredNorm();
  }
  terms["action_rate"] = std::max(-action_rate, k.penalty_floor);

  const double torque_sq =
      context.applied_torques.size() > 0 ? context.applied_torques.squaredNorm()
                                         : 0.0;
  terms["torque"] = -torque_sq;  // bounded by actuator limits

  terms["alive"] = 1.0;
  return terms;
}

RewardBreakdown compose_total(const RewardContext& context,
                              const RewardParams& params) {
  const RewardWeights& w = params.weights;
  const RewardConstants& k = params.constants;
  RewardBreakdown out;

  out.angular_momentum.raw = reward_angular_momentum(
      context.momentum, k.momentum_clip_lo, k.momentum_clip_hi,
      k.momentum_yaw_only);
  out.angular_momentum.weighted = w.alpha_a * out.angular_momentum.raw;

  const double ratio =
      k.fixed_velocity_ratio
          ? 1.0
          : velocity_ratio(context.commanded_velocity.x(), context.curriculum_v_max);

  out.base_height.raw = reward_base_height(
      context.base_height - context.nominal_base_height,
      context.target_height_offset, k.base_height_beta, k.base_height_gamma,
      ratio);
  out.base_height.weighted = w.alpha_v * w.alpha_b * out.base_height.raw;

  out.feet_clearance.raw = reward_feet_clearance(
      context.foot_heights, context.target_foot_height, ratio,
      context.swing_mask, k.feet_clearance_bounded);
  out.feet_clearance.weighted = w.alpha_v * w.alpha_f * out.feet_clearance.raw;

  out.joint_position.raw = reward_joint_position(
      context.joint_positions, context.joint_targets, context.joint_velocities,
      k.joint_pos_beta, k.joint_pos_gamma, k.joint_pos_clip_lo,
      k.joint_pos_clip_hi, k.joint_vel_exponent_clamp);
  out.joint_position.weighted = w.alpha_v * w.alpha_p * out.joint_position.raw;

  const auto general = general_reward_bundle(context, params);
  out.velocity_tracking_raw = general.at("velocity_tracking");
  out.general.reserve(general.size());
  for (const auto& [name, raw] : general) {
    const auto it = w.general_term_weights.find(name);
    const double weight = it == w.general_term_weights.end() ? 0.0 : it->second;
    out.general.push_back({name, {raw, w.alpha_c * weight * raw}});
  }

  // Fixed summation order: the four named categories, then the general terms
  // in name order. Tests rely on recomposing this sum bit-for-bit.
  double total = out.angular_momentum.weighted;
  total += out.base_height.weighted;
  total += out.feet_clearance.weighted;
  total += out.joint_position.weighted;
  for (const auto& [name, term] : out.general) total += term.weighted;
  out.total = total;
  return out;
}

}  // namespace kinolab::rewards
