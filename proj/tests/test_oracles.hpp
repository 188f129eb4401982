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

// Brute-force reference computations for the momentum tests. Deliberately
// written with explicit componentwise loops, independent of the library's
// vectorized path.

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "kinodyn.hpp"
#include "rng.hpp"

namespace kinolab::testing {

inline std::pair<Eigen::Vector3d, Eigen::Vector3d> oracle_com(
    const kinodyn::BodySnapshot& snap) {
  double m = 0.0;
  std::array<double, 3> p{0, 0, 0}, v{0, 0, 0};
  for (const auto& link : snap.links) {
    m += link.mass;
    for (int i = 0; i < 3; ++i) {
      p[i] += link.mass * link.com_position[i];
      v[i] += link.mass * link.com_velocity[i];
    }
  }
  return {Eigen::Vector3d(p[0] / m, p[1] / m, p[2] / m),
          Eigen::Vector3d(v[0] / m, v[1] / m, v[2] / m)};
}

// Double loop: explicit cross product and matrix-vector product per link.
inline Eigen::Vector3d oracle_total_momentum(const kinodyn::BodySnapshot& snap) {
  const auto [cp, cv] = oracle_com(snap);
  std::array<double, 3> total{0, 0, 0};
  for (const auto& link : snap.links) {
    const double rx = link.com_position[0] - cp[0];
    const double ry = link.com_position[1] - cp[1];
    const double rz = link.com_position[2] - cp[2];
    const double px = link.mass * (link.com_velocity[0] - cv[0]);
    const double py = link.mass * (link.com_velocity[1] - cv[1]);
    const double pz = link.mass * (link.com_velocity[2] - cv[2]);
    total[0] += ry * pz - rz * py;
    total[1] += rz * px - rx * pz;
    total[2] += rx * py - ry * px;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        total[i] += link.inertia(i, j) * link.angular_velocity[j];
      }
    }
  }
  return {total[0], total[1], total[2]};
}

// 3-10 links with random symmetric PSD inertias, mixed groups.
inline kinodyn::BodySnapshot random_snapshot(Rng& rng) {
  kinodyn::BodySnapshot snap;
  const int n = 3 + static_cast<int>(rng.integer(8));
  for (int i = 0; i < n; ++i) {
    kinodyn::LinkState link;
    link.mass = rng.uniform(0.1, 8.0);
    Eigen::Matrix3d a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = rng.uniform(-1, 1);
    link.inertia = a * a.transpose();  // symmetric PSD
    link.com_position =
        Eigen::Vector3d(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    link.com_velocity =
        Eigen::Vector3d(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    link.angular_velocity =
        Eigen::Vector3d(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4));
    link.group = static_cast<kinodyn::LinkGroup>(rng.integer(kinodyn::kNumGroups));
    snap.links.push_back(link);
  }
  return snap;
}

}  // namespace kinolab::testing
