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

#include <cstdint>
#include <string>
#include <vector>

#include "curriculum.hpp"
#include "env.hpp"
#include "rewards.hpp"
#include "trainer.hpp"

namespace kinolab {

struct EvalConfig {
  std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
  int episodes_per_point = 5;
  double episode_length_s = 10.0;
  double warmup_s = 2.0;  // excluded from the reported means
  bool log_trajectories = true;
};

// The complete declarative run configuration. Parsing is strict: unknown
// keys are rejected with a diagnostic naming the offending key.
struct RunConfig {
  std::string run_name = "baseline";
  std::string output_root = "runs";
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  env::RobotSpec robot = env::RobotSpec::reduced_biped();
  env::EnvOptions env_options;
  env::DomainRandomizationConfig domain_randomization;
  rewards::RewardParams reward_params;
  curriculum::CurriculumState curriculum;
  trainer::TrainerConfig trainer_config;
  EvalConfig eval;

  static RunConfig defaults() { return RunConfig(); }
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
  std::string to_json_text() const;

  void validate() const;
};

}  // namespace kinolab
