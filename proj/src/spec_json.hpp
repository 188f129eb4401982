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

// Internal JSON bindings for the robot spec; shared by the spec loader and
// the run-configuration loader.

#include "json_util.hpp"
#include "robot_spec.hpp"

namespace kinolab::env {

RobotSpec robot_spec_from_json(const Json& j);
Json robot_spec_to_json(const RobotSpec& spec);

}  // namespace kinolab::env
