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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "rewards.hpp"

using namespace kinolab::rewards;
using kinolab::ConfigError;
using kinolab::InvalidInput;
namespace kinodyn = kinolab::kinodyn;

namespace {

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

RewardContext zero_context() {
  RewardContext ctx;
  ctx.joint_positions = Eigen::VectorXd::Zero(16);
  ctx.joint_targets = Eigen::VectorXd::Zero(16);
  ctx.joint_velocities = Eigen::VectorXd::Zero(16);
  ctx.applied_torques = Eigen::VectorXd::Zero(16);
  ctx.action = Eigen::VectorXd::Zero(16);
  ctx.prev_action = Eigen::VectorXd::Zero(16);
  ctx.curriculum_v_max = 3.5;
  return ctx;
}

}  // namespace

TEST_CASE("velocity_ratio") {
  CHECK(velocity_ratio(0.0, 3.5) == 0.0);
  CHECK(velocity_ratio(3.5, 3.5) == 1.0);
  CHECK(velocity_ratio(1.75, 3.5) == 0.5);
  CHECK(velocity_ratio(5.0, 3.5) == 1.0);   // clamped
  CHECK(velocity_ratio(-1.0, 3.5) == 0.0);  // clamped
  CHECK_THROWS_AS(velocity_ratio(1.0, 0.0), InvalidInput);

  // Monotone non-decreasing in v_cmd for fixed v_max.
  double prev = -1.0;
  for (double v = -0.5; v <= 4.0; v += 0.01) {
    const double r = velocity_ratio(v, 3.5);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("angular momentum reward") {
  kinodyn::MomentumReport report;
  report.total.setZero();
  CHECK(close(reward_angular_momentum(report, -5.0, 0.0), -1.0));

  report.total = Eigen::Vector3d(std::log(5.0), 0, 0);
  CHECK(close(reward_angular_momentum(report, -5.0, 0.0), -5.0));

  report.total = Eigen::Vector3d(10.0, 0, 0);
  CHECK(close(reward_angular_momentum(report, -5.0, 0.0), -5.0));

  // Yaw-only selection ignores the planar components.
  report.total = Eigen::Vector3d(100.0, 100.0, 0.0);
  CHECK(close(reward_angular_momentum(report, -5.0, 0.0, true), -1.0));

  CHECK_THROWS_AS(reward_angular_momentum(report, 1.0, -1.0), ConfigError);

  // With the default bounds the value lives in [-5, -1].
  for (double n = 0.0; n < 20.0; n += 0.37) {
    report.total = Eigen::Vector3d(n, 0, 0);
    const double r = reward_angular_momentum(report, -5.0, 0.0);
    CHECK(r <= -1.0);
    CHECK(r >= -5.0);
  }
}

TEST_CASE("base height reward") {
  // Deviation exactly on target.
  CHECK(close(reward_base_height(0.05 * 0.6 * 0.5, 0.6, 100.0, 0.05, 0.5), 1.0));
  // 0.01 m off target with beta 100.
  CHECK(close(reward_base_height(0.01, 0.0, 100.0, 0.05, 0.0),
              0.36787944117144233));
  // Standing at nominal with zero command.
  CHECK(close(reward_base_height(0.0, -0.6, 100.0, 0.05, 0.0), 1.0));

  // In (0, 1], equal to 1 only at zero deviation.
  for (double d = -0.5; d <= 0.5; d += 0.013) {
    const double r = reward_base_height(d, 0.0, 100.0, 0.05, 0.0);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
    if (d != 0.0) CHECK(r < 1.0);
  }
}

TEST_CASE("feet clearance reward") {
  const double mask_off[2] = {0.0, 0.0};
  const double h[2] = {0.10, 0.02};
  CHECK(reward_feet_clearance(h, 0.06, 1.0, mask_off) == 0.0);

  const double mask_one[2] = {1.0, 0.0};
  const double at_target[2] = {0.06, 0.0};
  CHECK(close(reward_feet_clearance(at_target, 0.06, 1.0, mask_one), 0.0));

  CHECK(close(reward_feet_clearance(h, 0.06, 1.0, mask_one), 0.04));

  // Bounded variant penalizes over-lift as well.
  CHECK(close(reward_feet_clearance(h, 0.06, 1.0, mask_one, true), -0.04));

  const double short_mask[1] = {1.0};
  CHECK_THROWS_AS(reward_feet_clearance(h, 0.06, 1.0, short_mask), InvalidInput);
}

TEST_CASE("joint position reward") {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(16);
  Eigen::VectorXd theta_hat = Eigen::VectorXd::Zero(16);
  Eigen::VectorXd theta_dot = Eigen::VectorXd::Zero(16);

  theta_dot.setConstant(1.7);  // any velocity; zero error stays at 1
  CHECK(close(reward_joint_position(theta, theta_hat, theta_dot), 1.0));

  theta_dot.setZero();
  theta_hat[0] = 0.5;  // error norm exactly 0.5
  CHECK(close(reward_joint_position(theta, theta_hat, theta_dot),
              0.26787944117144233));

  theta_hat[0] = 2.0;  // error norm 2.0; clip saturates at 0.5
  CHECK(close(reward_joint_position(theta, theta_hat, theta_dot),
              -0.08168436111126582));

  // Strictly decreasing in the error norm for beta < 0, fixed theta_dot.
  double prev = 2.0;
  for (double e = 0.0; e <= 3.0; e += 0.1) {
    theta_hat[0] = e;
    const double r = reward_joint_position(theta, theta_hat, theta_dot);
    CHECK(r < prev);
    prev = r;
  }

  // The exponent guard keeps fast negative joint velocities finite.
  theta_hat[0] = 1.0;
  theta_dot[0] = -1000.0;
  const double guarded = reward_joint_position(theta, theta_hat, theta_dot);
  CHECK(std::isfinite(guarded));
  CHECK(close(guarded, std::exp(-2.0 * std::exp(5.0)) - 0.2 * 0.5));

  Eigen::VectorXd wrong = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(reward_joint_position(theta, wrong, theta_dot), InvalidInput);
}

TEST_CASE("velocity tracking reward") {
  const Eigen::Vector3d cmd(1.2, 0.1, 0.0);
  CHECK(close(reward_velocity_tracking(cmd, cmd), 1.0));

  const Eigen::Vector3d off(1.2 + 0.5, 0.1, 0.0);  // planar error norm 0.5
  CHECK(close(reward_velocity_tracking(off, cmd), 0.36787944117144233));

  const Eigen::Vector3d far(100.0, 0.0, 0.0);
  CHECK(reward_velocity_tracking(far, cmd) < 1e-12);

  // Yaw-rate differences do not enter the planar tracking term.
  Eigen::Vector3d spin = cmd;
  spin.z() = 9.0;
  CHECK(close(reward_velocity_tracking(spin, cmd), 1.0));
}

TEST_CASE("general bundle zeros") {
  RewardParams params;
  RewardContext ctx = zero_context();
  auto terms = general_reward_bundle(ctx, params);
  CHECK(terms.at("action_rate") == 0.0);
  CHECK(terms.at("orientation") == 0.0);
  CHECK(terms.at("torque") == 0.0);
  CHECK(terms.at("alive") == 1.0);
  CHECK(close(terms.at("velocity_tracking"), 1.0));
  CHECK(close(terms.at("yaw_tracking"), 1.0));

  ctx.base_roll = 0.1;
  ctx.base_pitch = -0.2;
  terms = general_reward_bundle(ctx, params);
  CHECK(close(terms.at("orientation"), -(0.01 + 0.04)));

  for (const auto& [name, value] : terms) {
    CHECK(std::isfinite(value));
  }
}

TEST_CASE("compose_total matches the category arithmetic") {
  RewardParams params;
  RewardContext ctx = zero_context();

  SUBCASE("base height alone contributes alpha_v * alpha_b") {
    params.weights.alpha_a = 0.0;
    params.weights.alpha_p = 0.0;
    params.weights.alpha_c = 0.0;
    // Zero command, zero deviation: r^b = 1, masks keep r^f at 0, alpha_p off.
    const auto breakdown = compose_total(ctx, params);
    CHECK(close(breakdown.base_height.raw, 1.0));
    CHECK(close(breakdown.total, 0.02));
  }

  SUBCASE("all weights zero gives zero total") {
    params.weights.alpha_a = 0.0;
    params.weights.alpha_v = 0.0;
    params.weights.alpha_c = 0.0;
    CHECK(compose_total(ctx, params).total == 0.0);
  }

  SUBCASE("momentum penalty alone") {
    params.weights.alpha_v = 0.0;
    params.weights.alpha_c = 0.0;
    // Zero momentum: r^a = clip(-exp(0)) = -1.
    const auto breakdown = compose_total(ctx, params);
    CHECK(close(breakdown.angular_momentum.raw, -1.0));
    CHECK(close(breakdown.total, -0.05));
  }
}

TEST_CASE("compose_total is linear in each raw term") {
  RewardParams params;
  RewardContext ctx = zero_context();
  ctx.swing_mask = {1.0, 0.0};
  ctx.foot_heights = {0.03, 0.0};
  ctx.target_foot_height = 0.0;

  const auto breakdown = compose_total(ctx, params);
  ctx.foot_heights = {0.06, 0.0};
  const auto doubled = compose_total(ctx, params);
  CHECK(doubled.feet_clearance.raw == 2.0 * breakdown.feet_clearance.raw);
  CHECK(doubled.feet_clearance.weighted == 2.0 * breakdown.feet_clearance.weighted);
}

TEST_CASE("breakdown total equals the ordered sum bit-for-bit") {
  RewardParams params;
  RewardContext ctx = zero_context();
  ctx.momentum.total = Eigen::Vector3d(0.3, -0.2, 0.4);
  ctx.base_height = 0.63;
  ctx.nominal_base_height = 0.62;
  ctx.target_height_offset = -0.6;
  ctx.commanded_velocity = Eigen::Vector3d(1.1, 0.05, -0.2);
  ctx.actual_base_velocity = Eigen::Vector3d(0.9, -0.02, 0.1);
  ctx.swing_mask = {0.7, 0.0};
  ctx.foot_heights = {0.05, 0.01};
  ctx.target_foot_height = 0.08;
  ctx.joint_targets.setConstant(0.21);
  ctx.joint_velocities.setConstant(-0.4);
  ctx.applied_torques.setConstant(3.0);
  ctx.action.setConstant(0.1);
  ctx.base_roll = 0.03;
  ctx.base_pitch = -0.06;

  const auto b = compose_total(ctx, params);
  double sum = b.angular_momentum.weighted;
  sum += b.base_height.weighted;
  sum += b.feet_clearance.weighted;
  sum += b.joint_position.weighted;
  for (const auto& [name, term] : b.general) sum += term.weighted;
  CHECK(sum == b.total);

  // Weighted values are the raw values scaled as composed.
  CHECK(b.angular_momentum.weighted ==
        params.weights.alpha_a * b.angular_momentum.raw);
  CHECK(b.base_height.weighted ==
        params.weights.alpha_v * params.weights.alpha_b * b.base_height.raw);
}
