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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "config.hpp"

namespace kinolab::evaluation {

// Physics perturbation profile for the low-to-high-fidelity cross-check:
// the same checkpoint is evaluated under nominal and perturbed physics.
struct PerturbationProfile {
  double contact_stiffness_scale = 1.0;
  double contact_damping_scale = 1.0;
  double friction_scale = 1.0;
  double mass_scale = 1.0;
  double gravity_scale = 1.0;
  int substep_multiplier = 1;  // finer integration: substeps * k, dt / k

  static PerturbationProfile identity() { return {}; }
  static PerturbationProfile from_file(const std::string& path);
  std::string to_json_text() const;
};

struct EvalRow {
  double commanded = 0.0;
  double mean_velocity = 0.0;  // fall-as-zero convention
  double std_velocity = 0.0;   // across episodes
  double fall_rate = 0.0;
  double tracking_error_l1 = 0.0;  // |v - v_cmd| with fall-as-zero
  double mean_abs_yaw_momentum = 0.0;
  std::array<double, kinodyn::kNumGroups> mean_group_momentum{};
  int episodes = 0;
};

struct EvaluationReport {
  std::vector<EvalRow> rows;
  double cycle_time = 0.0;
  std::uint64_t seed = 0;
  std::string checkpoint_path;

  std::string to_csv() const;
  // Commanded velocity of the highest grid point whose fall rate is below
  // 0.5, or the lowest grid point when none qualifies.
  double highest_reached_velocity() const;
};

// Deterministic-policy rollouts on the velocity grid. Episodes that end in a
// fall report 0 m/s. When `out_dir` is set, writes report.csv, the plot
// files, and (per config) trajectories.jsonl under it.
EvaluationReport evaluate_checkpoint(
    const RunConfig& config, const trainer::Checkpoint& ckpt,
    const std::vector<double>& grid, int episodes_per_point, std::uint64_t seed,
    const std::optional<std::string>& out_dir,
    const PerturbationProfile& profile = PerturbationProfile::identity());

// Loads and dimension-checks the checkpoint against the biped observation
// sizes; throws CheckpointError on mismatch.
trainer::Checkpoint load_biped_checkpoint(const std::string& path);

}  // namespace kinolab::evaluation
