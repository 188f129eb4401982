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
#include <utility>

#include "curriculum.hpp"
#include "robot_spec.hpp"

namespace kinolab::env {

struct GaitParams {
  double swing_ramp = 0.1;      // mask ramp width, phase units
  double hip_swing_gain = 0.5;  // rad at ratio 1
  double knee_swing_gain = 0.7;
  double arm_swing_gain = 0.45;
  double cycle_ref = 0.64;      // s; stride correction reference
};

// (sin, cos) of the gait clock. Throws InvalidInput when cycle_time <= 0.
std::pair<double, double> gait_clock(double time, double cycle_time);

// Swing masks per foot: the left foot swings on phase [0, 0.5), the right on
// [0.5, 1), with smoothstep ramps of `ramp` phase units at each end. The
// stance mask is 1 - swing mask.
std::array<double, 2> swing_mask(double phase, double ramp = 0.1);

// Reference joint targets: half-sine hip/knee pitch bumps during each leg's
// swing phase with amplitude proportional to the velocity ratio
// command.vx / v_max, a shoulder-pitch bump opposing the same-side hip,
// defaults elsewhere.
Eigen::VectorXd reference_joint_targets(double phase,
                                        const curriculum::Command& command,
                                        double cycle_time,
                                        const RobotSpec& spec, double v_max,
                                        const GaitParams& params = {});

}  // namespace kinolab::env
