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

#include <string>

#include "curriculum.hpp"
#include "policy.hpp"

namespace kinolab::trainer {

// Versioned binary tensor container: magic, format version, a JSON header
// describing shapes and the curriculum state, then raw little-endian doubles.
// Loads are all-or-nothing; truncation, bad magic, version or shape
// mismatches raise CheckpointError.

struct Checkpoint {
  Policy policy;
  RunningNormalizer obs_normalizer;
  RunningNormalizer priv_normalizer;
  curriculum::CurriculumState curriculum;
  long iteration = 0;
  long long total_steps = 0;
  std::string config_json;  // run configuration snapshot, optional
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace kinolab::trainer
