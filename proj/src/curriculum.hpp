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

#include "rng.hpp"

namespace kinolab::curriculum {

// Reward-gated curricula: the commanded-velocity range expands and the gait
// cycle time shrinks whenever the windowed tracking reward clears a fraction
// of its maximum. Both rules fire on the same gate evaluation.

struct CurriculumState {
  double v_min = 0.0;        // m/s
  double v_max = 1.0;        // m/s
  double v_cap = 3.5;        // m/s
  double v_increment = 0.5;  // m/s per update
  double cycle_time = 0.64;  // s
  double cycle_shrink = 0.95;
  double cycle_floor = 0.48;  // s
  double lambda_threshold = 0.8;

  // Command sampling ranges for the lateral and yaw components.
  double lateral_range = 0.3;  // m/s, symmetric
  double yaw_range = 0.3;      // rad/s, symmetric
};

struct Command {
  double vx = 0.0;        // m/s
  double vy = 0.0;        // m/s
  double yaw_rate = 0.0;  // rad/s
};

// Throws ConfigError when the state invariants are violated.
void validate(const CurriculumState& state);

// r_trk >= lambda * r_trk_max; r_trk is the evaluation-window mean tracking
// reward. Throws InvalidInput when r_trk_max <= 0.
bool threshold_met(double r_trk, double r_trk_max, double lambda);

// Expands v_max by v_increment up to v_cap when the gate fires; idempotent at
// the cap. v_min stays at its configured floor.
CurriculumState update_velocity_range(CurriculumState state, double r_trk,
                                      double r_trk_max);

// Shrinks the cycle time by cycle_shrink down to cycle_floor when the gate
// fires.
CurriculumState update_cycle_time(CurriculumState state, double r_trk,
                                  double r_trk_max);

// One gate evaluation, both rule applications.
CurriculumState update(CurriculumState state, double r_trk, double r_trk_max);

// vx uniform on [v_min, v_max]; vy and yaw rate uniform on their symmetric
// ranges. Deterministic given the rng state.
Command sample_command(const CurriculumState& state, Rng& rng);

}  // namespace kinolab::curriculum
