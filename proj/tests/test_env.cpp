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
#include <vector>

#include "env.hpp"
#include "errors.hpp"
#include "gait.hpp"
#include "kinodyn.hpp"
#include "sim.hpp"

using namespace kinolab::env;
using kinolab::InvalidInput;
namespace curriculum = kinolab::curriculum;
namespace kinodyn = kinolab::kinodyn;
namespace rewards = kinolab::rewards;

namespace {

DomainRandomizationConfig quiet_dr() {
  DomainRandomizationConfig dr;
  dr.enabled = false;
  dr.push_enabled = false;
  dr.noise_enabled = false;
  return dr;
}

double mechanical_energy(const kinodyn::BodySnapshot& snap, double gravity) {
  double e = 0.0;
  for (const auto& link : snap.links) {
    e += 0.5 * link.mass * link.com_velocity.squaredNorm();
    e += 0.5 * link.angular_velocity.dot(link.inertia * link.angular_velocity);
    e += link.mass * gravity * link.com_position.z();
  }
  return e;
}

}  // namespace

TEST_CASE("observation dimensions match the contract") {
  CHECK(kSingleObsDim == 59);
  CHECK(kSinglePrivDim == 89);
  CHECK(kStackedObsDim == 885);
  CHECK(kStackedPrivDim == 267);
  CHECK(kNumJoints == 16);

  Environment env(RobotSpec::reduced_biped(), quiet_dr(), {}, {}, 1);
  CHECK(env.obs_dim() == 885);
  CHECK(env.priv_dim() == 267);
}

TEST_CASE("gait clock") {
  auto [s0, c0] = gait_clock(0.0, 0.64);
  CHECK(s0 == doctest::Approx(0.0));
  CHECK(c0 == doctest::Approx(1.0));

  auto [s1, c1] = gait_clock(0.16, 0.64);  // quarter cycle
  CHECK(s1 == doctest::Approx(1.0));
  CHECK(c1 == doctest::Approx(0.0).epsilon(1e-9));

  for (double t = 0.0; t < 3.0; t += 0.137) {
    auto [s, c] = gait_clock(t, 0.64);
    CHECK(s * s + c * c == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(gait_clock(1.0, 0.0), InvalidInput);
}

TEST_CASE("swing mask") {
  auto mid_left = swing_mask(0.25);
  CHECK(mid_left[0] == 1.0);
  CHECK(mid_left[1] == 0.0);

  auto mid_right = swing_mask(0.75);
  CHECK(mid_right[0] == 0.0);
  CHECK(mid_right[1] == 1.0);

  // Swing and stance masks are complementary at every phase.
  for (double p = 0.0; p < 1.0; p += 0.0137) {
    const auto mask = swing_mask(p);
    const double stance0 = 1.0 - mask[0];
    const double stance1 = 1.0 - mask[1];
    CHECK(mask[0] + stance0 == doctest::Approx(1.0));
    CHECK(mask[1] + stance1 == doctest::Approx(1.0));
    CHECK(mask[0] >= 0.0);
    CHECK(mask[0] <= 1.0);
    CHECK(mask[1] >= 0.0);
    CHECK(mask[1] <= 1.0);
  }
}

TEST_CASE("reference joint targets") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  curriculum::Command cmd;

  SUBCASE("zero command keeps defaults") {
    cmd.vx = 0.0;
    for (double p = 0.0; p < 1.0; p += 0.1) {
      CHECK(reference_joint_targets(p, cmd, 0.64, spec, 1.0)
                .isApprox(spec.default_angles()));
    }
  }

  SUBCASE("half-cycle shift swaps the leg references") {
    cmd.vx = 1.0;
    for (double p = 0.0; p < 0.5; p += 0.03) {
      const auto a = reference_joint_targets(p, cmd, 0.64, spec, 1.0);
      const auto b = reference_joint_targets(p + 0.5, cmd, 0.64, spec, 1.0);
      CHECK(a[kLeftHipPitch] == doctest::Approx(b[kRightHipPitch]));
      CHECK(a[kLeftKneePitch] == doctest::Approx(b[kRightKneePitch]));
      CHECK(a[kLeftShoulderPitch] == doctest::Approx(b[kRightShoulderPitch]));
    }
  }

  SUBCASE("shoulder opposes the same-side hip at every phase") {
    cmd.vx = 1.0;
    const auto defaults = spec.default_angles();
    bool saw_nonzero = false;
    for (double p = 0.005; p < 1.0; p += 0.01) {
      const auto t = reference_joint_targets(p, cmd, 0.64, spec, 1.0);
      const double hip = t[kLeftHipPitch] - defaults[kLeftHipPitch];
      const double shoulder =
          t[kLeftShoulderPitch] - defaults[kLeftShoulderPitch];
      CHECK(hip * shoulder <= 0.0);
      if (hip != 0.0) {
        CHECK(shoulder * hip < 0.0);
        saw_nonzero = true;
      }
    }
    CHECK(saw_nonzero);
  }
}

TEST_CASE("pd torques") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  const Eigen::VectorXd q = spec.default_angles();
  const Eigen::VectorXd dq = Eigen::VectorXd::Zero(kNumJoints);

  CHECK(pd_torques(spec, q, q, dq).norm() == 0.0);

  RobotSpec custom = spec;
  custom.joints[kLeftKneePitch].kp = 100.0;
  custom.joints[kLeftKneePitch].kd = 0.0;
  Eigen::VectorXd targets = q;
  targets[kLeftKneePitch] += 0.1;
  const auto tau = pd_torques(custom, targets, q, dq);
  CHECK(tau[kLeftKneePitch] == doctest::Approx(10.0));

  targets[kLeftKneePitch] += 100.0;  // force saturation
  const auto clamped = pd_torques(custom, targets, q, dq);
  CHECK(clamped[kLeftKneePitch] == custom.joints[kLeftKneePitch].torque_limit);

  Eigen::VectorXd bad = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(pd_torques(spec, bad, q, dq), InvalidInput);
}

TEST_CASE("single pinned joint follows the torque oracle") {
  RobotSpec spec = RobotSpec::reduced_biped();
  spec.joints[kLeftKneePitch].kp = 100.0;
  spec.joints[kLeftKneePitch].kd = 0.0;
  spec.joints[kLeftKneePitch].damping = 0.0;

  const double dt = 1e-3;
  Sim sim(spec, 1.0, 1.0, {}, dt, 1, 9.81);
  SimState state = sim.make_state(spec.default_angles(), 5.0);  // airborne

  Eigen::VectorXd targets = spec.default_angles();
  targets[kLeftKneePitch] += 0.1;  // tau = 10 N m exactly
  sim.step(state, targets, 0.64);

  const double inertia = spec.joints[kLeftKneePitch].reflected_inertia;
  const double expected = 10.0 / inertia * dt;
  CHECK(std::abs(state.joint_velocities[kLeftKneePitch] - expected) <= 1e-6);
}

TEST_CASE("free base conserves velocity without gravity or torque") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Sim sim(spec, 1.0, /*gain_scale=*/0.0, {}, 1e-3, 10, /*gravity=*/0.0);
  SimState state = sim.make_state(spec.default_angles(), 5.0);
  state.base_lin_velocity = Eigen::Vector3d(0.7, -0.3, 0.2);

  const Eigen::Vector3d v0 = state.base_lin_velocity;
  for (int i = 0; i < 100; ++i) {
    sim.step(state, spec.default_angles(), 0.64);
  }
  CHECK((state.base_lin_velocity - v0).norm() <= 1e-9);
}

TEST_CASE("penetrating foot produces an upward normal force") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Sim sim(spec, 1.0, 0.0, {}, 1e-3, 1, 9.81);
  SimState state = sim.make_state(spec.default_angles(), -0.02);  // 2 cm in

  const double vz0 = state.base_lin_velocity.z();
  sim.step(state, spec.default_angles(), 0.64);
  // Net upward: more than gravity alone would explain.
  CHECK(state.base_lin_velocity.z() > vz0 - 9.81 * 1e-3);
  CHECK(state.foot_contact[0]);
  CHECK(state.foot_contact[1]);
}

TEST_CASE("no contact force above the ground") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Sim sim(spec, 1.0, 0.0, {}, 1e-3, 1, 0.0);
  SimState state = sim.make_state(spec.default_angles(), 0.05);
  sim.step(state, spec.default_angles(), 0.64);
  CHECK_FALSE(state.foot_contact[0]);
  CHECK_FALSE(state.foot_contact[1]);
  CHECK(state.base_lin_velocity.norm() <= 1e-12);
}

TEST_CASE("free-fall energy drift stays under 1 percent over 1 s") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  const double gravity = 9.81;
  Sim sim(spec, 1.0, 0.0, {}, 1e-3, 10, gravity);
  SimState state = sim.make_state(spec.default_angles(), 10.0);
  state.base_lin_velocity = Eigen::Vector3d(1.0, 0.0, 0.5);
  state.base_ang_velocity = Eigen::Vector3d(0.5, 0.3, 0.2);

  const double e0 = mechanical_energy(sim.snapshot(state), gravity);
  for (int i = 0; i < 100; ++i) {
    sim.step(state, spec.default_angles(), 0.64);
  }
  const double e1 = mechanical_energy(sim.snapshot(state), gravity);
  CHECK(std::abs(e1 - e0) / std::abs(e0) < 0.01);
}

TEST_CASE("quaternion stays unit norm while tumbling") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Sim sim(spec, 1.0, 0.0, {}, 1e-3, 10, 0.0);
  SimState state = sim.make_state(spec.default_angles(), 10.0);
  state.base_ang_velocity = Eigen::Vector3d(2.0, -1.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    sim.step(state, spec.default_angles(), 0.64);
    CHECK(std::abs(state.base_orientation.norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("standing under PD control stays upright") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Sim sim(spec, 1.0, 1.0, {}, 1e-3, 10, 9.81);
  SimState state = sim.make_state(spec.default_angles());
  for (int i = 0; i < 300; ++i) {  // 3 s
    sim.step(state, spec.default_angles(), 0.64);
  }
  CHECK(state.base_position.z() > 0.8 * spec.nominal_base_height);
  CHECK(std::abs(state.base_position.x()) < 0.15);
  CHECK(std::abs(state.base_position.y()) < 0.1);
  // Settled: small residual velocity.
  CHECK(state.base_lin_velocity.norm() < 0.1);
}

TEST_CASE("velocity impulse is applied exactly") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Sim sim(spec, 1.0, 1.0, {}, 1e-3, 10, 9.81);
  SimState state = sim.make_state(spec.default_angles());
  const Eigen::Vector3d v0 = state.base_lin_velocity;
  sim.apply_velocity_impulse(state, {0.3, -0.1, 0.0}, {0.0, 0.0, 0.05});
  CHECK((state.base_lin_velocity - v0 - Eigen::Vector3d(0.3, -0.1, 0.0)).norm() ==
        0.0);
  CHECK(state.base_ang_velocity.z() == 0.05);
}

TEST_CASE("mirror symmetry of the dynamics") {
  const RobotSpec spec = RobotSpec::reduced_biped();

  // Joint mirror: swap sides, flip roll/yaw signs.
  auto mirror_joints = [&spec](const Eigen::VectorXd& q) {
    Eigen::VectorXd m(kNumJoints);
    auto flip = [&spec](int j, double v) {
      return spec.joints[j].axis == 1 ? v : -v;
    };
    for (int j = 0; j < 6; ++j) m[j] = flip(j + 6, q[j + 6]);
    for (int j = 0; j < 6; ++j) m[j + 6] = flip(j, q[j]);
    m[kLeftShoulderPitch] = q[kRightShoulderPitch];
    m[kLeftElbowPitch] = q[kRightElbowPitch];
    m[kRightShoulderPitch] = q[kLeftShoulderPitch];
    m[kRightElbowPitch] = q[kLeftElbowPitch];
    return m;
  };
  const Eigen::Matrix3d S = Eigen::Vector3d(1, -1, 1).asDiagonal();
  auto mirror_state = [&](const SimState& s) {
    SimState m = s;
    m.base_position = S * s.base_position;
    m.base_orientation =
        Eigen::Quaterniond(S * s.base_orientation.toRotationMatrix() * S);
    m.base_lin_velocity = S * s.base_lin_velocity;
    m.base_ang_velocity = -(S * s.base_ang_velocity);
    m.joint_positions = mirror_joints(s.joint_positions);
    m.joint_velocities = mirror_joints(s.joint_velocities);
    return m;
  };

  Sim sim_a(spec, 1.0, 1.0, {}, 1e-3, 10, 9.81);
  Sim sim_b(spec, 1.0, 1.0, {}, 1e-3, 10, 9.81);
  SimState a = sim_a.make_state(spec.default_angles());
  a.base_ang_velocity = Eigen::Vector3d(0.1, 0.05, -0.2);
  a.base_lin_velocity = Eigen::Vector3d(0.3, 0.1, 0.0);
  SimState b = mirror_state(a);

  Eigen::VectorXd targets = spec.default_angles();
  targets[kLeftHipPitch] -= 0.3;
  targets[kLeftKneePitch] += 0.4;
  targets[kLeftHipRoll] += 0.1;
  targets[kLeftShoulderPitch] += 0.5;
  const Eigen::VectorXd mirrored_targets = mirror_joints(targets);

  for (int i = 0; i < 50; ++i) {
    sim_a.step(a, targets, 0.64);
    sim_b.step(b, mirrored_targets, 0.64);
  }
  const SimState expect = mirror_state(a);
  CHECK((b.base_position - expect.base_position).norm() <= 1e-6);
  CHECK((b.joint_positions - expect.joint_positions).norm() <= 1e-6);
  CHECK((b.base_lin_velocity - expect.base_lin_velocity).norm() <= 1e-6);
}

TEST_CASE("arm counter-swing strictly reduces yaw momentum") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  curriculum::Command cmd;
  cmd.vx = 1.0;
  const double v_max = 1.0;
  const double tau = 0.64;
  const GaitParams gait;

  auto snapshot_at = [&](double phase, bool arms) {
    const double dp = 1e-4;
    Eigen::VectorXd q =
        reference_joint_targets(phase, cmd, tau, spec, v_max, gait);
    Eigen::VectorXd qp =
        reference_joint_targets(phase + dp, cmd, tau, spec, v_max, gait);
    Eigen::VectorXd qm =
        reference_joint_targets(phase - dp, cmd, tau, spec, v_max, gait);
    Eigen::VectorXd dq = (qp - qm) / (2.0 * dp * tau);
    if (!arms) {
      const auto defaults = spec.default_angles();
      for (int j : {kLeftShoulderPitch, kLeftElbowPitch, kRightShoulderPitch,
                    kRightElbowPitch}) {
        q[j] = defaults[j];
        dq[j] = 0.0;
      }
    }
    Sim sim(spec, 1.0, 1.0, {}, 1e-3, 10, 9.81);
    SimState state = sim.make_state(spec.default_angles());
    state.joint_positions = q;
    state.joint_velocities = dq;
    return sim.snapshot(state);
  };

  for (int k = 0; k < 16; ++k) {
    const double phase = k / 16.0 + 0.01;
    const auto with_arms =
        kinodyn::total_angular_momentum(snapshot_at(phase, true));
    const auto without_arms =
        kinodyn::total_angular_momentum(snapshot_at(phase, false));
    CHECK(std::abs(with_arms.total.z()) < std::abs(without_arms.total.z()));
  }
}

TEST_CASE("environment reset determinism and bounds") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  DomainRandomizationConfig dr;  // enabled

  SUBCASE("noise disabled puts joints exactly at defaults") {
    Environment env(spec, quiet_dr(), {}, {}, 3);
    CHECK(env.sim_state().joint_positions.isApprox(spec.default_angles()));
    CHECK(env.sim_state().base_position.z() ==
          doctest::Approx(spec.nominal_base_height));
  }

  SUBCASE("same seed gives identical state") {
    Environment a(spec, dr, {}, {}, 77);
    Environment b(spec, dr, {}, {}, 77);
    CHECK(a.sim_state().joint_positions == b.sim_state().joint_positions);
    CHECK(a.sim_state().base_position == b.sim_state().base_position);
    CHECK(a.episode_friction() == b.episode_friction());
  }

  SUBCASE("reset height stays within the noise bound") {
    Environment env(spec, dr, {}, {}, 11);
    for (int i = 0; i < 1000; ++i) {
      env.reset();
      CHECK(std::abs(env.sim_state().base_position.z() -
                     spec.nominal_base_height) <=
            dr.reset_height_noise + 1e-12);
      CHECK((env.sim_state().joint_positions - spec.default_angles())
                .cwiseAbs()
                .maxCoeff() <= dr.reset_joint_noise + 1e-12);
    }
  }
}

TEST_CASE("environment step plumbing") {
  const RobotSpec spec = RobotSpec::reduced_biped();
  Environment env(spec, quiet_dr(), {}, {}, 5);
  curriculum::CurriculumState cur;
  env.set_curriculum(cur);
  env.reset();

  SUBCASE("non-finite action faults the episode") {
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(kNumJoints);
    bad[3] = std::nan("");
    const auto result = env.step(bad);
    CHECK(result.done);
    CHECK(result.termination == Termination::kFault);
  }

  SUBCASE("standing keeps running; zeroed base height falls") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kNumJoints);
    auto result = env.step(zero);
    CHECK(result.termination == Termination::kRunning);
    CHECK_FALSE(result.done);
  }

  SUBCASE("timeout fires at the episode cap") {
    EnvOptions opts;
    opts.episode_length_s = 0.05;
    Environment short_env(spec, quiet_dr(), {}, opts, 5);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kNumJoints);
    EnvStepResult result;
    for (int i = 0; i < 5; ++i) result = short_env.step(zero);
    CHECK(result.termination == Termination::kTimeout);
  }
}

TEST_CASE("fresh episode pads the history with zeros") {
  Environment env(RobotSpec::reduced_biped(), quiet_dr(), {}, {}, 5);
  std::vector<double> obs(kStackedObsDim);
  env.write_observation(obs.data());

  // Frame 0 is fresh, frames 1..14 are zero padding.
  bool frame0_nonzero = false;
  for (int i = 0; i < kSingleObsDim; ++i) frame0_nonzero |= obs[i] != 0.0;
  CHECK(frame0_nonzero);
  for (int f = 1; f < kObsStack; ++f) {
    for (int i = 0; i < kSingleObsDim; ++i) {
      CHECK(obs[f * kSingleObsDim + i] == 0.0);
    }
  }
}

TEST_CASE("history shifts one slot per step, oldest dropped") {
  Environment env(RobotSpec::reduced_biped(), quiet_dr(), {}, {}, 5);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kNumJoints);

  std::vector<double> before(kStackedObsDim), after(kStackedObsDim);
  for (int i = 0; i < kObsStack + 3; ++i) env.step(zero);
  env.write_observation(before.data());
  env.step(zero);
  env.write_observation(after.data());
  for (int f = 1; f < kObsStack; ++f) {
    for (int i = 0; i < kSingleObsDim; ++i) {
      CHECK(after[f * kSingleObsDim + i] ==
            before[(f - 1) * kSingleObsDim + i]);
    }
  }
}

TEST_CASE("privileged frame carries the episode parameters") {
  DomainRandomizationConfig dr;
  dr.push_enabled = false;
  dr.noise_enabled = false;
  Environment env(RobotSpec::reduced_biped(), dr, {}, {}, 21);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kNumJoints);
  env.step(zero);

  std::vector<double> priv(kStackedPrivDim);
  env.write_privileged(priv.data());
  CHECK(priv[59] == env.episode_friction());
  CHECK(priv[60] == env.episode_mass_scale());

  // Tracking-difference slots equal reference - actual of the same step.
  const auto& state = env.sim_state();
  const auto ref = reference_joint_targets(
      state.phase, env.command(), env.cycle_time(),
      env.spec(), 1.0, env.options().gait);
  for (int j = 0; j < kNumJoints; ++j) {
    CHECK(priv[69 + j] ==
          doctest::Approx(ref[j] - state.joint_positions[j]).epsilon(1e-12));
  }
}

TEST_CASE("pushes stay within bounds and are recorded") {
  DomainRandomizationConfig dr;
  dr.noise_enabled = false;
  dr.push_interval_range = {0.02, 0.04};
  Environment env(RobotSpec::reduced_biped(), dr, {}, {}, 31);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kNumJoints);

  int pushes_seen = 0;
  std::vector<double> priv(kStackedPrivDim);
  for (int i = 0; i < 2000; ++i) {
    const auto result = env.step(zero);
    env.write_privileged(priv.data());
    const double mag = std::hypot(priv[64], priv[65]);
    CHECK(mag <= dr.push_velocity_max + 1e-12);
    CHECK(std::abs(priv[66]) <= dr.push_angular_max + 1e-12);
    CHECK(std::abs(priv[67]) <= dr.push_angular_max + 1e-12);
    CHECK(std::abs(priv[68]) <= dr.push_angular_max + 1e-12);
    if (mag > 0.0) ++pushes_seen;
    if (result.done) env.reset();
  }
  CHECK(pushes_seen > 0);

  SUBCASE("push disabled leaves the recorded slots at zero") {
    Environment calm(RobotSpec::reduced_biped(), quiet_dr(), {}, {}, 31);
    for (int i = 0; i < 100; ++i) calm.step(zero);
    calm.write_privileged(priv.data());
    CHECK(priv[64] == 0.0);
    CHECK(priv[65] == 0.0);
  }
}

TEST_CASE("trajectories are bit-identical for identical seeds and actions") {
  DomainRandomizationConfig dr;  // full randomization on
  auto run = [&dr]() {
    Environment env(RobotSpec::reduced_biped(), dr, {}, {}, 1234);
    kinolab::Rng action_rng(55);
    std::vector<double> trace;
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXd action(kNumJoints);
      for (int j = 0; j < kNumJoints; ++j) action[j] = action_rng.uniform(-1, 1);
      const auto result = env.step(action);
      trace.push_back(env.sim_state().base_position.x());
      trace.push_back(env.sim_state().base_position.z());
      trace.push_back(result.breakdown.total);
      if (result.done) env.reset();
    }
    return trace;
  };
  CHECK(run() == run());
}

TEST_CASE("locked arms hold the arm joints at their defaults") {
  EnvOptions opts;
  opts.lock_arms = true;
  Environment env(RobotSpec::reduced_biped(), quiet_dr(), {}, opts, 9);
  Eigen::VectorXd action = Eigen::VectorXd::Constant(kNumJoints, 2.0);
  for (int i = 0; i < 100; ++i) env.step(action);
  const auto& spec = env.spec();
  for (int j : {kLeftShoulderPitch, kLeftElbowPitch, kRightShoulderPitch,
                kRightElbowPitch}) {
    CHECK(std::abs(env.sim_state().joint_positions[j] -
                   spec.joints[j].default_angle) < 0.05);
  }
}
