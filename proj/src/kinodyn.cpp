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

#include "kinodyn.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinolab::kinodyn {

namespace {

bool finite(const LinkState& link) {
  return std::isfinite(link.mass) && link.inertia.allFinite() &&
         link.com_position.allFinite() && link.com_velocity.allFinite() &&
         link.angular_velocity.allFinite();
}

}  // namespace

LinkGroup group_from_name(std::string_view name) {
  if (name == "torso") return LinkGroup::kTorso;
  if (name == "left_arm") return LinkGroup::kLeftArm;
  if (name == "right_arm") return LinkGroup::kRightArm;
  if (name == "left_leg") return LinkGroup::kLeftLeg;
  if (name == "right_leg") return LinkGroup::kRightLeg;
  throw InvalidInput("unknown link group: " + std::string(name));
}

const char* group_name(LinkGroup group) {
  switch (group) {
    case LinkGroup::kTorso: return "torso";
    case LinkGroup::kLeftArm: return "left_arm";
    case LinkGroup::kRightArm: return "right_arm";
    case LinkGroup::kLeftLeg: return "left_leg";
    case LinkGroup::kRightLeg: return "right_leg";
  }
  throw InvalidInput("unknown link group tag");
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> whole_body_com(
    const BodySnapshot& snapshot) {
  if (snapshot.links.empty()) {
    throw InvalidInput("whole_body_com: empty snapshot");
  }
  double total_mass = 0.0;
  Eigen::Vector3d weighted_pos = Eigen::Vector3d::Zero();
  Eigen::Vector3d weighted_vel = Eigen::Vector3d::Zero();
  for (const LinkState& link : snapshot.links) {
    if (!(link.mass > 0.0)) {
      throw InvalidInput("whole_body_com: link mass must be positive");
    }
    if (!finite(link)) {
      throw InvalidInput("whole_body_com: non-finite link state");
    }
    total_mass += link.mass;
    weighted_pos += link.mass * link.com_position;
    weighted_vel += link.mass * link.com_velocity;
  }
  return {weighted_pos / total_mass, weighted_vel / total_mass};
}

Eigen::Vector3d link_momentum_term(const LinkState& link,
                                   const Eigen::Vector3d& com_position,
                                   const Eigen::Vector3d& com_velocity) {
  if (!finite(link) || !com_position.allFinite() || !com_velocity.allFinite()) {
    throw InvalidInput("link_momentum_term: non-finite input");
  }
  const Eigen::Vector3d rel_pos = link.com_position - com_position;
  const Eigen::Vector3d rel_momentum = link.mass * (link.com_velocity - com_velocity);
  return rel_pos.cross(rel_momentum) + link.inertia * link.angular_velocity;
}

MomentumReport total_angular_momentum(const BodySnapshot& snapshot) {
  MomentumReport report;
  auto [com_pos, com_vel] = whole_body_com(snapshot);
  report.com_position = com_pos;
  report.com_velocity = com_vel;
  for (auto& group : report.per_group) group.setZero();
  for (const LinkState& link : snapshot.links) {
    report.per_group[static_cast<int>(link.group)] +=
        link_momentum_term(link, com_pos, com_vel);
  }
  report.total.setZero();
  for (const auto& group : report.per_group) report.total += group;
  return report;
}

void validate_snapshot(const BodySnapshot& snapshot) {
  if (snapshot.links.empty()) {
    throw InvalidInput("validate_snapshot: empty snapshot");
  }
  for (const LinkState& link : snapshot.links) {
    if (!(link.mass > 0.0)) {
      throw InvalidInput("validate_snapshot: link mass must be positive");
    }
    if (!finite(link)) {
      throw InvalidInput("validate_snapshot: non-finite link state");
    }
    const double scale = std::max(1.0, link.inertia.cwiseAbs().maxCoeff());
    if ((link.inertia - link.inertia.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * scale) {
      throw InvalidInput("validate_snapshot: inertia tensor not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(link.inertia);
    if (eig.eigenvalues().minCoeff() < -1e-12) {
      throw InvalidInput(
          "validate_snapshot: inertia tensor not positive semidefinite");
    }
    const int g = static_cast<int>(link.group);
    if (g < 0 || g >= kNumGroups) {
      throw InvalidInput("validate_snapshot: unknown link group tag");
    }
  }
}

}  // namespace kinolab::kinodyn
