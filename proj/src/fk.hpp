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

#include "kinodyn.hpp"
#include "robot_spec.hpp"

namespace kinolab::env {

struct LinkKinematics {
  Eigen::Matrix3d rotation;           // link frame, world
  Eigen::Vector3d com;                // base-relative when fk() is given the
                                      // base at the origin
  Eigen::Vector3d com_velocity;
  Eigen::Vector3d angular_velocity;
};

struct Kinematics {
  std::array<LinkKinematics, kNumLinks> links;
  // Contact points: left toe, left heel, right toe, right heel.
  std::array<Eigen::Vector3d, 4> contact_points;
  std::array<Eigen::Vector3d, 4> contact_velocities;
  // Lowest contact-point height per foot, same origin as the positions.
  std::array<double, 2> sole_heights;
  // Mass-weighted CoM of all links (same origin as the positions).
  Eigen::Vector3d com;
  Eigen::Vector3d com_velocity;
};

// Forward kinematics with analytic twist propagation. Passing a zero base
// position yields base-relative coordinates; passing zero base velocity and
// omega yields the joint-rate-only velocity field. The accumulated CoM is
// independent of any uniform mass scale.
Kinematics forward_kinematics(const RobotSpec& spec,
                              const Eigen::Vector3d& base_position,
                              const Eigen::Matrix3d& base_rotation,
                              const Eigen::Vector3d& base_velocity,
                              const Eigen::Vector3d& base_omega,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& dq);

// Link masses in spec order, scaled.
std::array<double, kNumLinks> link_masses(const RobotSpec& spec,
                                          double mass_scale = 1.0);
// Local (principal, link-frame) inertia diagonal per link, scaled.
std::array<Eigen::Vector3d, kNumLinks> link_inertias(const RobotSpec& spec,
                                                     double mass_scale = 1.0);

const char* link_name(int link);
kinodyn::LinkGroup link_group(int link);

}  // namespace kinolab::env
