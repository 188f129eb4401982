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

#include "curriculum.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace kinolab::curriculum {

void validate(const CurriculumState& state) {
  if (!(state.v_min <= state.v_max && state.v_max <= state.v_cap)) {
    throw ConfigError("curriculum: requires v_min <= v_max <= v_cap");
  }
  if (!(state.cycle_floor <= state.cycle_time)) {
    throw ConfigError("curriculum: requires cycle_floor <= cycle_time");
  }
  if (!(state.lambda_threshold > 0.0 && state.lambda_threshold <= 1.0)) {
    throw ConfigError("curriculum: requires 0 < lambda <= 1");
  }
  if (!(state.v_increment >= 0.0 && state.cycle_shrink > 0.0 &&
        state.cycle_shrink <= 1.0)) {
    throw ConfigError("curriculum: bad increment or shrink factor");
  }
}

bool threshold_met(double r_trk, double r_trk_max, double lambda) {
  if (!(r_trk_max > 0.0)) {
    throw InvalidInput("threshold_met: r_trk_max must be positive");
  }
  return r_trk >= lambda * r_trk_max;
}

CurriculumState update_velocity_range(CurriculumState state, double r_trk,
                                      double r_trk_max) {
  if (threshold_met(r_trk, r_trk_max, state.lambda_threshold)) {
    state.v_max = std::min(state.v_max + state.v_increment, state.v_cap);
  }
  return state;
}

CurriculumState update_cycle_time(CurriculumState state, double r_trk,
                                  double r_trk_max) {
  if (threshold_met(r_trk, r_trk_max, state.lambda_threshold)) {
    state.cycle_time = std::max(state.cycle_time * state.cycle_shrink,
                                state.cycle_floor);
  }
  return state;
}

CurriculumState update(CurriculumState state, double r_trk, double r_trk_max) {
  if (threshold_met(r_trk, r_trk_max, state.lambda_threshold)) {
    state.v_max = std::min(state.v_max + state.v_increment, state.v_cap);
    state.cycle_time = std::max(state.cycle_time * state.cycle_shrink,
                                state.cycle_floor);
  }
  return state;
}

Command sample_command(const CurriculumState& state, Rng& rng) {
  Command cmd;
  cmd.vx = rng.uniform(state.v_min, state.v_max);
  cmd.vy = rng.uniform(-state.lateral_range, state.lateral_range);
  cmd.yaw_rate = rng.uniform(-state.yaw_range, state.yaw_range);
  return cmd;
}

}  // namespace kinolab::curriculum
