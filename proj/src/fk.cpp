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

#include "fk.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinolab::env {

namespace {

Eigen::Matrix3d axis_rotation(int axis, double angle) {
  switch (axis) {
    case 0: return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
    case 1: return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY()).toRotationMatrix();
    case 2: return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  }
  throw InvalidInput("axis_rotation: axis must be 0, 1, or 2");
}

Eigen::Vector3d unit_axis(int axis) {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  a[axis] = 1.0;
  return a;
}

// A rigid-frame cursor walking down one chain: orientation plus the twist
// (omega, velocity of a tracked reference point).
struct Cursor {
  Eigen::Matrix3d rot;
  Eigen::Vector3d omega;
  Eigen::Vector3d v_ref;
  Eigen::Vector3d p_ref;

  Eigen::Vector3d velocity_at(const Eigen::Vector3d& point) const {
    return v_ref + omega.cross(point - p_ref);
  }

  // Revolute joint at `pivot` about the local `axis` of the current frame.
  void advance(int axis, double angle, double rate, const Eigen::Vector3d& pivot) {
    const Eigen::Vector3d world_axis = rot * unit_axis(axis);
    v_ref = velocity_at(pivot);
    p_ref = pivot;
    omega += world_axis * rate;
    rot = rot * axis_rotation(axis, angle);
  }
};

}  // namespace

std::array<double, kNumLinks> link_masses(const RobotSpec& spec,
                                          double mass_scale) {
  return {
      spec.torso.mass * mass_scale,     spec.thigh.mass * mass_scale,
      spec.shank.mass * mass_scale,     spec.foot.mass * mass_scale,
      spec.thigh.mass * mass_scale,     spec.shank.mass * mass_scale,
      spec.foot.mass * mass_scale,      spec.upper_arm.mass * mass_scale,
      spec.forearm.mass * mass_scale,   spec.upper_arm.mass * mass_scale,
      spec.forearm.mass * mass_scale,
  };
}

std::array<Eigen::Vector3d, kNumLinks> link_inertias(const RobotSpec& spec,
                                                     double mass_scale) {
  const auto s = [mass_scale](const Eigen::Vector3d& v) { return (mass_scale * v).eval(); };
  return {
      s(spec.torso.inertia),     s(spec.thigh.inertia),   s(spec.shank.inertia),
      s(spec.foot.inertia),      s(spec.thigh.inertia),   s(spec.shank.inertia),
      s(spec.foot.inertia),      s(spec.upper_arm.inertia),
      s(spec.forearm.inertia),   s(spec.upper_arm.inertia),
      s(spec.forearm.inertia),
  };
}

const char* link_name(int link) {
  static constexpr const char* kNames[kNumLinks] = {
      "torso",          "left_thigh",  "left_shank",  "left_foot",
      "right_thigh",    "right_shank", "right_foot",  "left_upper_arm",
      "left_forearm",   "right_upper_arm", "right_forearm",
  };
  return kNames[link];
}

kinodyn::LinkGroup link_group(int link) {
  using kinodyn::LinkGroup;
  switch (link) {
    case kTorso: return LinkGroup::kTorso;
    case kLeftThigh:
    case kLeftShank:
    case kLeftFoot: return LinkGroup::kLeftLeg;
    case kRightThigh:
    case kRightShank:
    case kRightFoot: return LinkGroup::kRightLeg;
    case kLeftUpperArm:
    case kLeftForearm: return LinkGroup::kLeftArm;
    case kRightUpperArm:
    case kRightForearm: return LinkGroup::kRightArm;
  }
  throw InvalidInput("link_group: bad link index");
}

Kinematics forward_kinematics(const RobotSpec& spec,
                              const Eigen::Vector3d& base_position,
                              const Eigen::Matrix3d& base_rotation,
                              const Eigen::Vector3d& base_velocity,
                              const Eigen::Vector3d& base_omega,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& dq) {
  if (q.size() != kNumJoints || dq.size() != kNumJoints) {
    throw InvalidInput("forward_kinematics: expected 16 joint values");
  }
  Kinematics out;

  const Cursor base{base_rotation, base_omega, base_velocity, base_position};

  auto emit = [&out](int link, const Cursor& c, const Eigen::Vector3d& com) {
    out.links[link].rotation = c.rot;
    out.links[link].com = com;
    out.links[link].com_velocity = c.velocity_at(com);
    out.links[link].angular_velocity = c.omega;
  };

  emit(kTorso, base, base_position + base_rotation * spec.torso_com);

  const Eigen::Vector3d down(0.0, 0.0, -1.0);

  for (int side = 0; side < 2; ++side) {
    const double mirror = side == 0 ? 1.0 : -1.0;
    const int j0 = side == 0 ? kLeftHipRoll : kRightHipRoll;
    const int thigh = side == 0 ? kLeftThigh : kRightThigh;
    const int shank = side == 0 ? kLeftShank : kRightShank;
    const int foot = side == 0 ? kLeftFoot : kRightFoot;

    Eigen::Vector3d hip_off = spec.hip_offset;
    hip_off.y() *= mirror;
    const Eigen::Vector3d hip = base_position + base_rotation * hip_off;

    Cursor c = base;
    c.advance(0, q[j0 + 0], dq[j0 + 0], hip);  // hip roll
    c.advance(2, q[j0 + 1], dq[j0 + 1], hip);  // hip yaw
    c.advance(1, q[j0 + 2], dq[j0 + 2], hip);  // hip pitch
    emit(thigh, c, hip + c.rot * (0.5 * spec.thigh_length * down));

    const Eigen::Vector3d knee = hip + c.rot * (spec.thigh_length * down);
    c.advance(1, q[j0 + 3], dq[j0 + 3], knee);  // knee pitch
    emit(shank, c, knee + c.rot * (0.5 * spec.shank_length * down));

    const Eigen::Vector3d ankle = knee + c.rot * (spec.shank_length * down);
    c.advance(1, q[j0 + 4], dq[j0 + 4], ankle);  // ankle pitch
    c.advance(0, q[j0 + 5], dq[j0 + 5], ankle);  // ankle roll
    emit(foot, c, ankle + c.rot * spec.foot_com);

    const Eigen::Vector3d toe = ankle + c.rot * spec.toe_offset;
    const Eigen::Vector3d heel = ankle + c.rot * spec.heel_offset;
    out.contact_points[2 * side + 0] = toe;
    out.contact_points[2 * side + 1] = heel;
    out.contact_velocities[2 * side + 0] = c.velocity_at(toe);
    out.contact_velocities[2 * side + 1] = c.velocity_at(heel);
    out.sole_heights[side] = std::min(toe.z(), heel.z());
  }

  for (int side = 0; side < 2; ++side) {
    const double mirror = side == 0 ? 1.0 : -1.0;
    const int j0 = side == 0 ? kLeftShoulderPitch : kRightShoulderPitch;
    const int upper = side == 0 ? kLeftUpperArm : kRightUpperArm;
    const int fore = side == 0 ? kLeftForearm : kRightForearm;

    Eigen::Vector3d sh_off = spec.shoulder_offset;
    sh_off.y() *= mirror;
    const Eigen::Vector3d shoulder = base_position + base_rotation * sh_off;

    Cursor c = base;
    c.advance(1, q[j0 + 0], dq[j0 + 0], shoulder);  // shoulder pitch
    emit(upper, c, shoulder + c.rot * (0.5 * spec.upper_arm_length * down));

    const Eigen::Vector3d elbow =
        shoulder + c.rot * (spec.upper_arm_length * down);
    c.advance(1, q[j0 + 1], dq[j0 + 1], elbow);  // elbow pitch
    emit(fore, c, elbow + c.rot * (0.5 * spec.forearm_length * down));
  }

  const auto masses = link_masses(spec);
  double total = 0.0;
  out.com.setZero();
  out.com_velocity.setZero();
  for (int i = 0; i < kNumLinks; ++i) {
    total += masses[i];
    out.com += masses[i] * out.links[i].com;
    out.com_velocity += masses[i] * out.links[i].com_velocity;
  }
  out.com /= total;
  out.com_velocity /= total;
  return out;
}

}  // namespace kinolab::env
