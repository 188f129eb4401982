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
#include <string_view>
#include <utility>
#include <vector>

namespace kinolab::kinodyn {

// Whole-body centroidal kinematics: center of mass and angular momentum of a
// set of rigid links about the whole-body CoM, with a per-limb-group split.
// All operations here are pure functions of a snapshot.

enum class LinkGroup : int {
  kTorso = 0,
  kLeftArm = 1,
  kRightArm = 2,
  kLeftLeg = 3,
  kRightLeg = 4,
};

inline constexpr int kNumGroups = 5;

// Throws InvalidInput for names outside the fixed set.
LinkGroup group_from_name(std::string_view name);
const char* group_name(LinkGroup group);

struct LinkState {
  double mass = 1.0;                 // kg
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // about link CoM, world frame
  Eigen::Vector3d com_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d com_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
  LinkGroup group = LinkGroup::kTorso;
};

struct BodySnapshot {
  std::vector<LinkState> links;
  double timestamp = 0.0;
};

struct MomentumReport {
  Eigen::Vector3d total = Eigen::Vector3d::Zero();  // kg m^2/s
  std::array<Eigen::Vector3d, kNumGroups> per_group{};
  Eigen::Vector3d com_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d com_velocity = Eigen::Vector3d::Zero();
};

// Mass-weighted mean of link CoM positions and velocities.
// Throws InvalidInput on an empty snapshot, non-positive mass, or non-finite
// values.
std::pair<Eigen::Vector3d, Eigen::Vector3d> whole_body_com(
    const BodySnapshot& snapshot);

// One link's contribution about the whole-body CoM:
//   (p - p_com) x m (v - v_com) + I w
Eigen::Vector3d link_momentum_term(const LinkState& link,
                                   const Eigen::Vector3d& com_position,
                                   const Eigen::Vector3d& com_velocity);

// Total and per-group angular momentum about the whole-body CoM. The total is
// accumulated as the sum of the per-group sums, so additivity is exact.
MomentumReport total_angular_momentum(const BodySnapshot& snapshot);

// Full invariant check (mass positivity, inertia symmetry and positive
// semidefiniteness down to a -1e-12 eigenvalue floor). Intended for snapshots
// entering from outside the simulator; throws InvalidInput on violation.
void validate_snapshot(const BodySnapshot& snapshot);

}  // namespace kinolab::kinodyn
