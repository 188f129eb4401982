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

#include "sim.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace kinolab::env {

namespace {

Eigen::Quaterniond integrate_orientation(const Eigen::Quaterniond& q,
                                         const Eigen::Vector3d& omega,
                                         double dt) {
  const double angle = omega.norm() * dt;
  if (angle < 1e-14) return q;
  const Eigen::Quaterniond delta(
      Eigen::AngleAxisd(angle, (omega / omega.norm()).eval()));
  return (delta * q).normalized();
}

}  // namespace

Eigen::VectorXd pd_torques(const RobotSpec& spec,
                           const Eigen::VectorXd& targets,
                           const Eigen::VectorXd& q, const Eigen::VectorXd& dq,
                           double gain_scale) {
  if (targets.size() != kNumJoints || q.size() != kNumJoints ||
      dq.size() != kNumJoints) {
    throw InvalidInput("pd_torques: expected 16 joint values");
  }
  Eigen::VectorXd tau(kNumJoints);
  for (int j = 0; j < kNumJoints; ++j) {
    const JointSpec& js = spec.joints[j];
    const double raw =
        gain_scale * (js.kp * (targets[j] - q[j]) - js.kd * dq[j]);
    tau[j] = std::clamp(raw, -js.torque_limit, js.torque_limit);
  }
  return tau;
}

struct Sim::Derived {
  Kinematics kin;                  // base-relative, joint-rate-only twists
  Eigen::Vector3d com_offset;      // whole-body CoM relative to base origin
  Eigen::Vector3d joint_com_vel;   // CoM velocity from joint rates alone
  Eigen::Matrix3d inertia_comp;    // composite inertia about the CoM
  Eigen::Vector3d momentum_rel;    // joint-rate angular momentum about the CoM
};

Sim::Sim(const RobotSpec& spec, double mass_scale, double gain_scale,
         const ContactParams& contact, double substep_dt, int substeps,
         double gravity)
    : spec_(spec),
      mass_scale_(mass_scale),
      gain_scale_(gain_scale),
      contact_(contact),
      dt_(substep_dt),
      substeps_(substeps),
      gravity_(gravity),
      masses_(link_masses(spec, mass_scale)),
      inertias_(link_inertias(spec, mass_scale)) {
  if (!(substep_dt > 0.0) || substeps < 1) {
    throw ConfigError("sim: substep_dt must be positive, substeps >= 1");
  }
  total_mass_ = 0.0;
  for (double m : masses_) total_mass_ += m;
}

Sim::Derived Sim::derive(const Eigen::Matrix3d& rot, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& dq) const {
  Derived d;
  d.kin = forward_kinematics(spec_, Eigen::Vector3d::Zero(), rot,
                             Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                             q, dq);
  d.com_offset = d.kin.com;
  d.joint_com_vel = d.kin.com_velocity;

  d.inertia_comp.setZero();
  d.momentum_rel.setZero();
  for (int i = 0; i < kNumLinks; ++i) {
    const LinkKinematics& link = d.kin.links[i];
    const Eigen::Matrix3d world_inertia =
        link.rotation * inertias_[i].asDiagonal() * link.rotation.transpose();
    const Eigen::Vector3d r = link.com - d.com_offset;
    d.inertia_comp += world_inertia;
    d.inertia_comp +=
        masses_[i] * (r.squaredNorm() * Eigen::Matrix3d::Identity() -
                      r * r.transpose());
    d.momentum_rel +=
        r.cross(masses_[i] * (link.com_velocity - d.joint_com_vel)) +
        world_inertia * link.angular_velocity;
  }
  return d;
}

SimState Sim::make_state(const Eigen::VectorXd& joint_angles,
                         double height_offset) const {
  if (joint_angles.size() != kNumJoints) {
    throw InvalidInput("make_state: expected 16 joint angles");
  }
  SimState state;
  state.joint_positions = joint_angles;
  state.joint_velocities = Eigen::VectorXd::Zero(kNumJoints);
  const auto kin = forward_kinematics(
      spec_, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity(),
      Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), joint_angles,
      state.joint_velocities);
  double lowest = 0.0;
  for (const auto& p : kin.contact_points) lowest = std::min(lowest, p.z());
  state.base_position = Eigen::Vector3d(0.0, 0.0, -lowest + height_offset);
  return state;
}

void Sim::apply_velocity_impulse(SimState& state, const Eigen::Vector3d& dv,
                                 const Eigen::Vector3d& domega) const {
  state.base_lin_velocity += dv;
  state.base_ang_velocity += domega;
}

kinodyn::BodySnapshot Sim::snapshot(const SimState& state) const {
  const Derived d = derive(state.base_orientation.toRotationMatrix(),
                           state.joint_positions, state.joint_velocities);
  kinodyn::BodySnapshot snap;
  snap.timestamp = state.time;
  snap.links.resize(kNumLinks);
  for (int i = 0; i < kNumLinks; ++i) {
    const LinkKinematics& link = d.kin.links[i];
    kinodyn::LinkState& out = snap.links[i];
    out.mass = masses_[i];
    out.inertia =
        link.rotation * inertias_[i].asDiagonal() * link.rotation.transpose();
    out.com_position = link.com + state.base_position;
    out.com_velocity = state.base_lin_velocity +
                       state.base_ang_velocity.cross(link.com) +
                       link.com_velocity;
    out.angular_velocity = state.base_ang_velocity + link.angular_velocity;
    out.group = link_group(i);
  }
  return snap;
}

StepInfo Sim::step(SimState& state, const Eigen::VectorXd& pd_targets,
                   double cycle_time) {
  if (pd_targets.size() != kNumJoints) {
    throw InvalidInput("step: expected 16 PD targets");
  }
  if (!(cycle_time > 0.0)) {
    throw InvalidInput("step: cycle_time must be positive");
  }

  Eigen::VectorXd q = state.joint_positions;
  Eigen::VectorXd dq = state.joint_velocities;
  Eigen::Quaterniond quat = state.base_orientation;
  Eigen::Matrix3d rot = quat.toRotationMatrix();

  // Canonical integrator state: whole-body CoM position/velocity and total
  // angular momentum about the CoM.
  Derived d = derive(rot, q, dq);
  Eigen::Vector3d omega = state.base_ang_velocity;
  Eigen::Vector3d com = state.base_position + d.com_offset;
  Eigen::Vector3d com_vel =
      state.base_lin_velocity + omega.cross(d.com_offset) + d.joint_com_vel;
  Eigen::Vector3d momentum = d.inertia_comp * omega + d.momentum_rel;

  Eigen::VectorXd torque_accum = Eigen::VectorXd::Zero(kNumJoints);
  std::array<bool, 2> contact{false, false};

  for (int step_i = 0; step_i < substeps_; ++step_i) {
    const Eigen::VectorXd tau = pd_torques(spec_, pd_targets, q, dq, gain_scale_);
    torque_accum += tau;
    for (int j = 0; j < kNumJoints; ++j) {
      const JointSpec& js = spec_.joints[j];
      dq[j] += dt_ * (tau[j] - js.damping * dq[j]) / js.reflected_inertia;
      dq[j] = std::clamp(dq[j], -js.velocity_limit, js.velocity_limit);
      q[j] += dt_ * dq[j];
      if (q[j] < js.lower_limit) {
        q[j] = js.lower_limit;
        dq[j] = std::max(dq[j], 0.0);
      } else if (q[j] > js.upper_limit) {
        q[j] = js.upper_limit;
        dq[j] = std::min(dq[j], 0.0);
      }
    }

    d = derive(rot, q, dq);
    const Eigen::Vector3d base_pos = com - d.com_offset;
    omega = d.inertia_comp.ldlt().solve(momentum - d.momentum_rel);
    const Eigen::Vector3d v_base =
        com_vel - omega.cross(d.com_offset) - d.joint_com_vel;

    Eigen::Vector3d force = Eigen::Vector3d::Zero();
    Eigen::Vector3d torque = Eigen::Vector3d::Zero();
    contact = {false, false};
    for (int c = 0; c < 4; ++c) {
      const Eigen::Vector3d point = d.kin.contact_points[c] + base_pos;
      if (point.z() >= 0.0) continue;
      const Eigen::Vector3d vel = v_base +
                                  omega.cross(d.kin.contact_points[c]) +
                                  d.kin.contact_velocities[c];
      const double normal =
          contact_.stiffness * (-point.z()) - contact_.damping * vel.z();
      if (normal <= 0.0) continue;
      Eigen::Vector3d f(0.0, 0.0, normal);
      const double vt = std::hypot(vel.x(), vel.y());
      if (vt > 1e-9) {
        const double mag =
            std::min(contact_.friction * normal, contact_.tangential_damping * vt);
        f.x() = -mag * vel.x() / vt;
        f.y() = -mag * vel.y() / vt;
      }
      force += f;
      torque += (point - com).cross(f);
      contact[c / 2] = true;
    }

    com_vel += dt_ * (force / total_mass_ + Eigen::Vector3d(0, 0, -gravity_));
    com += dt_ * com_vel;
    momentum += dt_ * torque;

    quat = integrate_orientation(quat, omega, dt_);
    rot = quat.toRotationMatrix();
    state.time += dt_;
  }

  // Write back the base pose/twist consistent with the final pose, so the
  // next step recovers the same (com, com_vel, momentum) exactly.
  d = derive(rot, q, dq);
  omega = d.inertia_comp.ldlt().solve(momentum - d.momentum_rel);
  const Eigen::Vector3d base_pos = com - d.com_offset;
  const Eigen::Vector3d v_base =
      com_vel - omega.cross(d.com_offset) - d.joint_com_vel;

  state.base_position = base_pos;
  state.base_orientation = quat;
  state.base_lin_velocity = v_base;
  state.base_ang_velocity = omega;
  state.joint_positions = q;
  state.joint_velocities = dq;
  state.foot_contact = contact;
  state.phase = std::fmod(state.time, cycle_time) / cycle_time;

  StepInfo info;
  info.foot_contact = contact;
  info.foot_heights = {d.kin.sole_heights[0] + base_pos.z(),
                       d.kin.sole_heights[1] + base_pos.z()};
  info.applied_torques = torque_accum / substeps_;
  info.snapshot.timestamp = state.time;
  info.snapshot.links.resize(kNumLinks);
  for (int i = 0; i < kNumLinks; ++i) {
    const LinkKinematics& link = d.kin.links[i];
    kinodyn::LinkState& out = info.snapshot.links[i];
    out.mass = masses_[i];
    out.inertia =
        link.rotation * inertias_[i].asDiagonal() * link.rotation.transpose();
    out.com_position = link.com + base_pos;
    out.com_velocity = v_base + omega.cross(link.com) + link.com_velocity;
    out.angular_velocity = omega + link.angular_velocity;
    out.group = link_group(i);
  }

  info.fault = !(state.base_position.allFinite() && quat.coeffs().allFinite() &&
                 state.base_lin_velocity.allFinite() &&
                 state.base_ang_velocity.allFinite() && q.allFinite() &&
                 dq.allFinite());
  return info;
}

}  // namespace kinolab::env
