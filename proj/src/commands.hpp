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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "evaluation.hpp"

namespace kinolab::commands {

// Ablation toggles; anything else is rejected with the list of valid names.
inline const std::vector<std::string>& valid_toggles() {
  static const std::vector<std::string> kToggles = {
      "no_momentum_reward",       // alpha_a = 0
      "no_velocity_scaled_rewards",  // velocity ratio pinned at 1
      "arms_locked",              // 4 arm joints frozen at defaults
      "fixed_cycle_time",         // cycle-time curriculum disabled
  };
  return kToggles;
}

// Applies a toggle set to a configuration copy. Throws ConfigError on an
// unknown toggle, listing the valid ones.
RunConfig apply_toggles(RunConfig config, const std::vector<std::string>& toggles);

struct TrainOutcome {
  std::string root;                   // <output_root>/<run_name>
  std::vector<std::string> run_dirs;  // one per seed
};

// Trains every seed in the config (or the single override); each run gets a
// config snapshot, metrics log and checkpoints under its own directory.
TrainOutcome cmd_train(const RunConfig& config,
                       std::optional<std::uint64_t> seed_override = {},
                       std::optional<std::string> out_override = {});

// Deterministic-policy evaluation of a checkpoint on a velocity grid.
evaluation::EvaluationReport cmd_eval(const RunConfig& config,
                                      const std::string& checkpoint_path,
                                      const std::vector<double>& grid,
                                      int episodes_per_point,
                                      std::uint64_t seed,
                                      const std::string& out_dir);

struct AblationOutcome {
  std::string out_dir;
  std::string table_path;  // side-by-side per-seed comparison table
};

// Trains baseline and toggled variants on shared seeds, evaluates both, and
// writes a side-by-side table including the per-group yaw momentum.
AblationOutcome cmd_ablate(const RunConfig& config,
                           const std::vector<std::string>& toggles,
                           const std::string& out_dir);

struct Sim2SimOutcome {
  evaluation::EvaluationReport nominal;
  evaluation::EvaluationReport perturbed;
  std::string paired_table_path;
};

// Evaluates one checkpoint under nominal and perturbed physics and emits a
// paired report with per-row deltas.
Sim2SimOutcome cmd_sim2sim(const RunConfig& config,
                           const std::string& checkpoint_path,
                           const std::string& profile_path,
                           const std::string& out_dir);

// Renders plots (and their backing data tables) from a run directory
// produced by cmd_train and/or cmd_eval. Missing inputs raise IoError naming
// the file.
std::vector<std::string> cmd_plot(const std::string& run_dir);

}  // namespace kinolab::commands
