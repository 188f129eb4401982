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

#include "fk.hpp"
#include "kinodyn.hpp"
#include "robot_spec.hpp"

namespace kinolab::env {

// Reduced-order dynamics: the joints are directly actuated second-order
// systems; the floating base integrates whole-body linear and angular
// momentum, deriving its angular velocity from
//   L = I_comp(pose) * omega + L_joint(pose, qdot),
// so limb motion exchanges momentum with the base exactly. Feet interact
// with the ground through spring-damper normal forces and Coulomb-capped
// tangential friction. Semi-implicit Euler at the substep rate.

struct ContactParams {
  double stiffness = 14000.0;            // N/m per contact point
  double damping = 350.0;                // N s/m
  double tangential_damping = 500.0;     // N s/m before the Coulomb cap
  double friction = 0.9;                 // Coulomb coefficient
};

struct SimState {
  Eigen::Vector3d base_position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond base_orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d base_lin_velocity = Eigen::Vector3d::Zero();  // base origin
  Eigen::Vector3d base_ang_velocity = Eigen::Vector3d::Zero();  // world frame
  Eigen::VectorXd joint_positions;   // 16, rad
  Eigen::VectorXd joint_velocities;  // 16, rad/s
  std::array<bool, 2> foot_contact{};
  double time = 0.0;
  double phase = 0.0;  // (time mod cycle_time) / cycle_time
};

struct StepInfo {
  std::array<bool, 2> foot_contact{};
  std::array<double, 2> foot_heights{};  // lowest contact point per foot, m
  Eigen::VectorXd applied_torques;       // mean over substeps, N m
  kinodyn::BodySnapshot snapshot;        // world-frame, full twists
  bool fault = false;                    // non-finite state detected
};

// PD torque per joint: kp (target - q) - kd qdot, gain-scaled and clamped to
// the torque limits. Throws InvalidInput on length mismatch.
Eigen::VectorXd pd_torques(const RobotSpec& spec,
                           const Eigen::VectorXd& targets,
                           const Eigen::VectorXd& q, const Eigen::VectorXd& dq,
                           double gain_scale = 1.0);

class Sim {
 public:
  Sim(const RobotSpec& spec, double mass_scale, double gain_scale,
      const ContactParams& contact, double substep_dt, int substeps,
      double gravity = 9.81);

  // Standing state: base at the nominal height (plus an offset), joints at
  // the given angles, everything at rest.
  SimState make_state(const Eigen::VectorXd& joint_angles,
                      double height_offset = 0.0) const;

  // One control step: integrates `substeps` substeps holding the PD targets
  // fixed. phase is refreshed against `cycle_time`.
  StepInfo step(SimState& state, const Eigen::VectorXd& pd_targets,
                double cycle_time);

  // Instantaneous impulse on the base (domain-randomization pushes).
  void apply_velocity_impulse(SimState& state, const Eigen::Vector3d& dv,
                              const Eigen::Vector3d& domega) const;

  // World-frame snapshot of the current state for the momentum module.
  kinodyn::BodySnapshot snapshot(const SimState& state) const;

  const RobotSpec& spec() const { return spec_; }
  double total_mass() const { return total_mass_; }
  double gravity() const { return gravity_; }

 private:
  struct Derived;  // per-substep FK products

  Derived derive(const Eigen::Matrix3d& rot, const Eigen::VectorXd& q,
                 const Eigen::VectorXd& dq) const;

  RobotSpec spec_;
  double mass_scale_;
  double gain_scale_;
  ContactParams contact_;
  double dt_;
  int substeps_;
  double gravity_;
  double total_mass_;
  std::array<double, kNumLinks> masses_;
  std::array<Eigen::Vector3d, kNumLinks> inertias_;
};

}  // namespace kinolab::env
