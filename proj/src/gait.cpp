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

#include "gait.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rewards.hpp"

namespace kinolab::env {

namespace {

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

// Swing profile for a foot whose swing occupies phase [0, 0.5).
double half_cycle_mask(double p, double ramp) {
  if (p < 0.0 || p >= 0.5) return 0.0;
  if (p < ramp) return smoothstep(p / ramp);
  if (p > 0.5 - ramp) return smoothstep((0.5 - p) / ramp);
  return 1.0;
}

// Half-sine bump over the same half cycle.
double swing_bump(double p) {
  if (p < 0.0 || p >= 0.5) return 0.0;
  return std::sin(2.0 * M_PI * p);
}

double wrap_phase(double p) {
  p = std::fmod(p, 1.0);
  return p < 0.0 ? p + 1.0 : p;
}

}  // namespace

std::pair<double, double> gait_clock(double time, double cycle_time) {
  if (!(cycle_time > 0.0)) {
    throw InvalidInput("gait_clock: cycle_time must be positive");
  }
  const double arg = 2.0 * M_PI * time / cycle_time;
  return {std::sin(arg), std::cos(arg)};
}

std::array<double, 2> swing_mask(double phase, double ramp) {
  const double p = wrap_phase(phase);
  return {half_cycle_mask(p, ramp), half_cycle_mask(wrap_phase(p - 0.5), ramp)};
}

Eigen::VectorXd reference_joint_targets(double phase,
                                        const curriculum::Command& command,
                                        double cycle_time,
                                        const RobotSpec& spec, double v_max,
                                        const GaitParams& params) {
  Eigen::VectorXd targets = spec.default_angles();
  const double p = wrap_phase(phase);
  const double ratio = rewards::velocity_ratio(command.vx, v_max);

  // Shorter cycles take shorter strides at the same commanded speed.
  const double stride =
      std::clamp(cycle_time / params.cycle_ref, 0.75, 1.25) * ratio;
  const double hip_amp = params.hip_swing_gain * stride;
  const double knee_amp = params.knee_swing_gain * stride;
  const double arm_amp = params.arm_swing_gain * stride;

  const double left = swing_bump(p);
  const double right = swing_bump(wrap_phase(p - 0.5));

  // Negative hip pitch swings the leg forward; the same-side shoulder opposes
  // it so arm momentum counters leg momentum.
  targets[kLeftHipPitch] += -hip_amp * left;
  targets[kLeftKneePitch] += knee_amp * left;
  targets[kLeftShoulderPitch] += arm_amp * left;

  targets[kRightHipPitch] += -hip_amp * right;
  targets[kRightKneePitch] += knee_amp * right;
  targets[kRightShoulderPitch] += arm_amp * right;

  return targets;
}

}  // namespace kinolab::env
